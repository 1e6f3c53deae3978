#include "egsim/batch.hpp"

#include <algorithm>

#include "egsim/semilinear.hpp"

namespace egsim {

uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

int biased_effect(Rng& rng, const GenKnobs& k) {
  if (rng.chance(k.negEffectBiasPct)) return -1;
  return rng.below(3) - 1;
}

}  // namespace

Oceg random_oceg(Rng& rng, const GenKnobs& k, int dimension) {
  Oceg g;
  g.dimension = dimension;
  int n0 = rng.range(k.minStatesPerSide, k.maxStatesPerSide);
  int n1 = rng.range(k.minStatesPerSide, k.maxStatesPerSide);
  for (int i = 0; i < n0; ++i)
    g.add_state("p" + std::to_string(i), Owner::P0);
  for (int i = 0; i < n1; ++i)
    g.add_state("q" + std::to_string(i), Owner::P1);
  int ns = n0 + n1;
  for (int q = 0; q < ns; ++q) {
    int out = rng.range(1, k.maxOutPerState);
    for (int t = 0; t < out; ++t) {
      std::vector<int> eff(dimension);
      for (int& e : eff) e = biased_effect(rng, k);
      g.rules.push_back({q, rng.below(3) - 1, rng.below(ns), eff});
    }
    if (rng.chance(k.zeroRulePct)) {
      std::vector<int> eff(dimension);
      for (int& e : eff) e = biased_effect(rng, k);
      g.zeroRules.push_back({q, rng.below(2), rng.below(ns), eff});
    }
  }
  complete_with_self_loops(g);
  return g;
}

Oca random_oca(Rng& rng, const GenKnobs& k, bool net) {
  Oca m;
  m.isNet = net;
  int n = rng.range(k.minStatesPerSide, k.maxStatesPerSide);
  for (int i = 0; i < n; ++i) m.states.declare("s" + std::to_string(i));
  for (int a = 0; a < k.actionCount; ++a)
    m.actions.declare(std::string(1, static_cast<char>('a' + a)));
  for (int q = 0; q < n; ++q) {
    int out = rng.range(1, k.maxOutPerState);
    for (int t = 0; t < out; ++t)
      m.rules.push_back(
          {q, rng.below(k.actionCount), rng.below(3) - 1, rng.below(n)});
    if (!net && rng.chance(k.zeroRulePct))
      m.zeroRules.push_back(
          {q, rng.below(k.actionCount), rng.below(2), rng.below(n)});
  }
  return m;
}

Vass random_vass(Rng& rng, const GenKnobs& k, int dimension) {
  Vass m;
  m.dimension = dimension;
  int n = rng.range(k.minStatesPerSide, k.maxStatesPerSide);
  for (int i = 0; i < n; ++i) m.states.declare("v" + std::to_string(i));
  for (int a = 0; a < k.actionCount; ++a)
    m.actions.declare(std::string(1, static_cast<char>('a' + a)));
  for (int q = 0; q < n; ++q) {
    int out = rng.range(1, k.maxOutPerState);
    for (int t = 0; t < out; ++t) {
      std::vector<int> eff(dimension);
      for (int& e : eff) e = biased_effect(rng, k);
      m.transitions.push_back({q, rng.below(k.actionCount), rng.below(n), eff});
    }
  }
  return m;
}

const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "Agree";
    case Agreement::LeftUnknown: return "LeftUnknown";
    case Agreement::RightUnknown: return "RightUnknown";
    case Agreement::BothUnknown: return "BothUnknown";
    default: return "DISAGREE";
  }
}

namespace {

Agreement classify_agreement(Winner l, Winner r) {
  bool lu = l == Winner::Unknown, ru = r == Winner::Unknown;
  if (lu && ru) return Agreement::BothUnknown;
  if (lu) return Agreement::LeftUnknown;
  if (ru) return Agreement::RightUnknown;
  return l == r ? Agreement::Agree : Agreement::Disagree;
}

}  // namespace

void BatchReport::add(BatchRow row) {
  if (!row.error.empty()) {
    ++errors;
  } else {
    switch (row.agreement) {
      case Agreement::Agree: ++agree; break;
      case Agreement::LeftUnknown: ++leftUnknown; break;
      case Agreement::RightUnknown: ++rightUnknown; break;
      case Agreement::BothUnknown: ++bothUnknown; break;
      default: ++disagree;
    }
  }
  rows.push_back(std::move(row));
}

Json BatchReport::to_json() const {
  Json j;
  j["kind"] = "batch-report";
  j["operation"] = operation;
  j["seed"] = seed;
  j["instances"] = instances;
  j["bounds"] = {{"counterCap", bounds.counterCap},
                 {"energyCap", bounds.energyCap},
                 {"roundCap", bounds.roundCap}};
  Json rs = Json::array();
  for (const auto& r : rows) {
    Json row = {{"instance", r.instance},
                {"operation", r.operation},
                {"position", r.position},
                {"left", to_string(r.left)},
                {"right", to_string(r.right)},
                {"agreement", to_string(r.agreement)}};
    if (!r.error.empty()) row["error"] = r.error;
    rs.push_back(row);
  }
  j["rows"] = rs;
  j["summary"] = {{"agree", agree},
                  {"leftUnknown", leftUnknown},
                  {"rightUnknown", rightUnknown},
                  {"bothUnknown", bothUnknown},
                  {"disagree", disagree},
                  {"errors", errors}};
  return j;
}

std::string BatchReport::serialize() const { return to_json().dump(2) + "\n"; }

namespace {

void run_energy_to_sim(const BatchSpec& spec, BatchReport& rep) {
  for (int i = 0; i < spec.instances; ++i) {
    Rng rng(mix_seed(spec.seed, i));
    Oceg g = random_oceg(rng, spec.knobs, 1);
    Peg peg = oceg_to_peg(g);
    EnergyToSimOutput red = energy_to_simulation(peg);
    Bounds pegBounds = spec.bounds;
    pegBounds.counterCap += 1;  // counter m is a stack of height m+1
    try {
      EnergyAnalysis energy(peg, pegBounds);
      SimAnalysis sim(&red.left, &red.right, spec.bounds);
      for (int q = 0; q < g.states.declared_count(); ++q)
        for (int c = 0; c <= spec.maxInitCounter; ++c)
          for (int e = 0; e <= spec.maxInitEnergy; ++e) {
            PegConf pos = oceg_conf_to_peg(OcegConf{q, c, {e}});
            BatchRow row;
            row.instance = i;
            row.operation = spec.operation;
            row.position = format_conf(g, OcegConf{q, c, {e}});
            row.left = energy.solve(pos).winner;
            row.right = sim.classify(red.map_position(pos));
            row.agreement = classify_agreement(row.left, row.right);
            rep.add(std::move(row));
          }
    } catch (const CapacityExceeded& ex) {
      BatchRow row;
      row.instance = i;
      row.operation = spec.operation;
      row.error = ex.what();
      rep.add(std::move(row));
    }
  }
}

void run_sim_to_energy(const BatchSpec& spec, BatchReport& rep) {
  for (int i = 0; i < spec.instances; ++i) {
    Rng rng(mix_seed(spec.seed, i));
    Oca a = random_oca(rng, spec.knobs, false);
    Vass v = random_vass(rng, spec.knobs, 1);
    Pda pda = oca_to_pda(a);
    SimToEnergyOutput red = simulation_to_energy(pda, v);
    try {
      SimAnalysis sim(&a, &v, spec.bounds);
      Bounds energyBounds = spec.bounds;
      energyBounds.counterCap += 1;
      EnergyAnalysis energy(red.game, energyBounds);
      for (int p = 0; p < a.states.declared_count(); ++p)
        for (int q = 0; q < v.states.declared_count(); ++q)
          for (int m = 0; m <= spec.maxInitCounter; ++m)
            for (int n = 0; n <= spec.maxInitEnergy; ++n) {
              SimPair pair{OcaConf{p, m}, VassConf{q, {n}}};
              PegConf pos = red.map_position(oca_conf_to_pda(a, OcaConf{p, m}),
                                             VassConf{q, {n}});
              BatchRow row;
              row.instance = i;
              row.operation = spec.operation;
              row.position = format_conf(a, OcaConf{p, m}) + " vs " +
                             format_conf(v, VassConf{q, {n}});
              row.left = sim.classify(pair);
              row.right = energy.solve(pos).winner;
              row.agreement = classify_agreement(row.left, row.right);
              rep.add(std::move(row));
            }
    } catch (const CapacityExceeded& ex) {
      BatchRow row;
      row.instance = i;
      row.operation = spec.operation;
      row.error = ex.what();
      rep.add(std::move(row));
    }
  }
}

void run_round_trip(const BatchSpec& spec, BatchReport& rep) {
  for (int i = 0; i < spec.instances; ++i) {
    Rng rng(mix_seed(spec.seed, i));
    Oca a = random_oca(rng, spec.knobs, false);
    Vass v = random_vass(rng, spec.knobs, 1);
    Pda pda = oca_to_pda(a);
    SimToEnergyOutput toEnergy = simulation_to_energy(pda, v);
    EnergyToSimOutput back = energy_to_simulation(toEnergy.game);
    try {
      SimAnalysis front(&a, &v, spec.bounds);
      Bounds backBounds = spec.bounds;
      backBounds.counterCap += 1;
      SimAnalysis rear(&back.left, &back.right, backBounds);
      for (int p = 0; p < a.states.declared_count(); ++p)
        for (int q = 0; q < v.states.declared_count(); ++q)
          for (int m = 0; m <= spec.maxInitCounter; ++m)
            for (int n = 0; n <= spec.maxInitEnergy; ++n) {
              SimPair pair{OcaConf{p, m}, VassConf{q, {n}}};
              PegConf mid = toEnergy.map_position(
                  oca_conf_to_pda(a, OcaConf{p, m}), VassConf{q, {n}});
              BatchRow row;
              row.instance = i;
              row.operation = spec.operation;
              row.position = format_conf(a, OcaConf{p, m}) + " vs " +
                             format_conf(v, VassConf{q, {n}});
              row.left = front.classify(pair);
              row.right = rear.classify(back.map_position(mid));
              row.agreement = classify_agreement(row.left, row.right);
              rep.add(std::move(row));
            }
    } catch (const CapacityExceeded& ex) {
      BatchRow row;
      row.instance = i;
      row.operation = spec.operation;
      row.error = ex.what();
      rep.add(std::move(row));
    }
  }
}

void run_refine(const BatchSpec& spec, BatchReport& rep) {
  for (int i = 0; i < spec.instances; ++i) {
    Rng rng(mix_seed(spec.seed, i));
    BatchRow row;
    row.instance = i;
    row.operation = spec.operation;
    try {
      if (i % 2 == 0) {
        Oceg g = random_oceg(rng, spec.knobs, 1);
        OcegConf init{rng.below(g.states.declared_count()),
                      rng.below(spec.maxInitCounter + 1),
                      {rng.below(spec.maxInitEnergy + 1)}};
        Verdict small = solve_energy_bounded(g, init, spec.bounds);
        Verdict big = refine(small, g, init, spec.largerBounds);
        row.position = format_conf(g, init);
        row.left = small.winner;
        row.right = big.winner;
      } else {
        Oca a = random_oca(rng, spec.knobs, false);
        Oca b = random_oca(rng, spec.knobs, true);
        SimPair pair{OcaConf{rng.below(a.states.declared_count()),
                             rng.below(spec.maxInitCounter + 1)},
                     OcaConf{rng.below(b.states.declared_count()),
                             rng.below(spec.maxInitCounter + 1)}};
        Verdict small = solve_simulation_bounded(&a, &b, pair, spec.bounds);
        Verdict big = refine(small, &a, &b, pair, spec.largerBounds);
        row.position = format_conf(a, std::get<OcaConf>(pair.left)) + " vs " +
                       format_conf(b, std::get<OcaConf>(pair.right));
        row.left = small.winner;
        row.right = big.winner;
      }
      // A definite verdict must survive larger bounds unchanged; Unknowns
      // resolving is expected and counts as LeftUnknown.
      if (row.left != Winner::Unknown && row.right != row.left)
        row.agreement = Agreement::Disagree;
      else
        row.agreement = classify_agreement(row.left, row.right);
    } catch (const CapacityExceeded& ex) {
      row.error = ex.what();
    }
    rep.add(std::move(row));
  }
}

}  // namespace

BatchReport run_batch(const BatchSpec& spec) {
  BatchReport rep;
  rep.operation = spec.operation;
  rep.seed = spec.seed;
  rep.instances = spec.instances;
  rep.bounds = spec.bounds;
  if (spec.operation == "energy-to-sim")
    run_energy_to_sim(spec, rep);
  else if (spec.operation == "sim-to-energy")
    run_sim_to_energy(spec, rep);
  else if (spec.operation == "round-trip")
    run_round_trip(spec, rep);
  else if (spec.operation == "refine")
    run_refine(spec, rep);
  else
    throw Error("unknown batch operation '" + spec.operation + "'");
  return rep;
}

}  // namespace egsim
