#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "egsim/batch.hpp"
#include "egsim/reductions.hpp"
#include "egsim/solvers.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace egsim;

namespace {

Bounds caps(int counter, int energy, int rounds) {
  return Bounds{counter, energy, rounds};
}

std::set<std::string> note_set(const std::vector<std::string>& notes) {
  return {notes.begin(), notes.end()};
}

OcaToOcnParams uniform_params(const Oca& a, const Oca& b, int l, int K,
                              long long w, bool black) {
  OcaToOcnParams p;
  p.l = l;
  p.K = K;
  p.statesLeft = a.states.declared_count();
  p.statesRight = b.states.declared_count();
  p.wAtL.assign(static_cast<size_t>(p.statesLeft) * p.statesRight,
                black ? kInfiniteW : w);
  p.blackLine.assign(p.wAtL.size() * K, 0);
  if (black)
    for (auto& x : p.blackLine) x = 1;
  return p;
}

}  // namespace

TEST_CASE("energy-to-sim: neutral P1 loop agrees at all small energies") {
  Oceg g;
  g.dimension = 1;
  int q = g.add_state("q", Owner::P1);
  g.rules.push_back({q, 0, q, {0}});
  Peg peg = oceg_to_peg(g);
  EnergyToSimOutput red = energy_to_simulation(peg);

  // One hatted copy of the only (P1) state on the automaton side; choice
  // states and the universal state on the VASS side.
  CHECK(red.left.states.declared_count() == 2);
  CHECK(red.right.states.declared_count() ==
        1 + static_cast<int>(peg.transitions.size()) + 1);

  EnergyAnalysis energy(peg, caps(8, 8, 20));
  SimAnalysis sim(&red.left, &red.right, caps(8, 8, 20));
  for (int e = 0; e <= 3; ++e) {
    PegConf pos = oceg_conf_to_peg(OcegConf{q, 0, {e}});
    CHECK(energy.solve(pos).winner == Winner::Win1);
    CHECK(sim.classify(red.map_position(pos)) == Winner::Win1);
  }
}

TEST_CASE("energy-to-sim: a blocked VASS reply leaves Duplicator stuck") {
  Oceg g;
  g.dimension = 1;
  int q = g.add_state("q", Owner::P1);
  g.rules.push_back({q, 0, q, {-1}});
  Peg peg = oceg_to_peg(g);
  EnergyToSimOutput red = energy_to_simulation(peg);
  PegConf pos = oceg_conf_to_peg(OcegConf{q, 0, {0}});
  Verdict sim = solve_simulation_bounded(&red.left, &red.right,
                                         red.map_position(pos), caps(8, 8, 20));
  CHECK(sim.winner == Winner::Win0);
  CHECK(solve_energy_bounded(peg, pos, caps(8, 8, 20)).winner == Winner::Win0);
}

TEST_CASE("energy-to-sim: mini oracle-equivalence batch") {
  BatchSpec spec;
  spec.operation = "energy-to-sim";
  spec.seed = 20240;
  spec.instances = 20;
  spec.bounds = caps(12, 12, 40);
  BatchReport rep = run_batch(spec);
  CHECK(rep.disagree == 0);
  CHECK(rep.errors == 0);
  CHECK(rep.definite_rate() > 0.5);
}

TEST_CASE("energy-to-sim: provenance covers every generator clause") {
  Oceg g;
  g.dimension = 1;
  int p = g.add_state("p", Owner::P0);
  int q = g.add_state("q", Owner::P1);
  g.rules.push_back({p, 0, q, {0}});
  g.rules.push_back({q, 1, p, {-1}});
  g.zeroRules.push_back({q, 0, q, {1}});
  complete_with_self_loops(g);
  EnergyToSimOutput red = energy_to_simulation(oceg_to_peg(g));
  CHECK(note_set(red.leftNotes) ==
        std::set<std::string>{"spoiler-emulates", "announce-top",
                              "implement-choice"});
  CHECK(note_set(red.rightNotes) ==
        std::set<std::string>{"follow-chosen", "choose", "confirm",
                              "escape-mismatch", "universal-loop"});
  CHECK(red.leftNotes.size() == red.left.transitions.size());
  CHECK(red.rightNotes.size() == red.right.transitions.size());
}

TEST_CASE("energy-to-sim: one-counter shape is preserved") {
  GenKnobs knobs;
  for (int i = 0; i < 10; ++i) {
    Rng rng(mix_seed(1009, i));
    Oceg g = random_oceg(rng, knobs, 1);
    Peg peg = oceg_to_peg(g);
    EnergyToSimOutput red = energy_to_simulation(peg);
    CHECK(is_one_counter_shaped(red.left));
    CHECK(validate(red.left).empty());
    CHECK(validate(red.right).empty());
    CHECK(red.flaggedLeftStates.empty());
  }
}

TEST_CASE("energy-to-sim: exact size bookkeeping") {
  GenKnobs knobs;
  for (int i = 0; i < 10; ++i) {
    Rng rng(mix_seed(1013, i));
    Oceg og = random_oceg(rng, knobs, 1);
    Peg g = oceg_to_peg(og);
    int ns = g.states.declared_count();
    int nsym = g.stackSymbols.declared_count();
    int p1states = 0, p0trans = 0, p1trans = 0;
    for (int s = 0; s < ns; ++s) p1states += g.owner[s] == Owner::P1;
    for (const auto& t : g.transitions)
      (g.owner[t.src] == Owner::P0 ? p0trans : p1trans) += 1;
    int nAct = static_cast<int>(g.transitions.size()) + nsym + 1;

    EnergyToSimOutput red = energy_to_simulation(g);
    CHECK(red.left.states.declared_count() == ns + p1states);
    CHECK(static_cast<int>(red.left.transitions.size()) ==
          p0trans + p1states * nsym + p1trans);
    CHECK(red.right.states.declared_count() == ns + p1trans + 1);
    CHECK(static_cast<int>(red.right.transitions.size()) ==
          p0trans + 2 * p1trans + p1trans * (nAct - 1) + nAct);
  }
}

TEST_CASE("sim-to-energy: reflexivity maps to Win1") {
  Oca a = corpus::neutral_loop_ocn();
  Pda pda = oca_to_pda(a);
  Vass v = ocn_to_vass1(a);
  SimToEnergyOutput red = simulation_to_energy(pda, v);
  REQUIRE(validate(red.game).empty());
  CHECK(is_one_counter_shaped(red.game));
  Bounds b = caps(8, 8, 20);
  EnergyAnalysis energy(red.game, b);
  for (int e = 0; e <= 3; ++e) {
    PegConf pos =
        red.map_position(oca_conf_to_pda(a, OcaConf{0, 0}), VassConf{0, {e}});
    CHECK(energy.solve(pos).winner == Winner::Win1);
  }
}

TEST_CASE("sim-to-energy: an unmatched Spoiler action drains Player 1") {
  Oca a;
  a.isNet = true;
  a.states.declare("p");
  int aa = a.actions.declare("a");
  int ab = a.actions.declare("b");
  a.rules.push_back({0, aa, 0, 0});
  a.rules.push_back({0, ab, 0, 0});
  Oca only_a = corpus::neutral_loop_ocn();
  Vass v = ocn_to_vass1(only_a);
  SimToEnergyOutput red = simulation_to_energy(oca_to_pda(a), v);
  PegConf pos =
      red.map_position(oca_conf_to_pda(a, OcaConf{0, 0}), VassConf{0, {2}});
  CHECK(solve_energy_bounded(red.game, pos, caps(8, 8, 30)).winner ==
        Winner::Win0);
}

TEST_CASE("sim-to-energy: provenance and exact sizes") {
  Oca a = corpus::decrement_loop_ocn();
  Pda pda = oca_to_pda(a);
  Vass v;
  v.dimension = 1;
  v.states.declare("w");
  v.actions.declare("a");
  v.transitions.push_back({0, 0, 0, {0}});
  SimToEnergyOutput red = simulation_to_energy(pda, v);
  CHECK(note_set(red.notes) == std::set<std::string>{"spoiler-step",
                                                     "duplicator-step",
                                                     "idle-loop", "drain-loop"});
  int nA = pda.states.declared_count(), nV = v.states.declared_count();
  int nsym = pda.stackSymbols.declared_count();
  int nAct = 1;  // shared alphabet {a}
  CHECK(red.game.states.declared_count() == nA * nV * (1 + nAct));
  CHECK(static_cast<int>(red.game.transitions.size()) ==
        static_cast<int>(pda.transitions.size()) * nV +
            static_cast<int>(v.transitions.size()) * nA * nsym +
            red.game.states.declared_count() * nsym);
}

TEST_CASE("composition: sim -> energy -> sim preserves definite verdicts") {
  GenKnobs knobs;
  long long definite = 0;
  for (int i = 0; i < 15; ++i) {
    Rng rng(mix_seed(1031, i));
    Oca a = random_oca(rng, knobs, false);
    Vass v = random_vass(rng, knobs, 1);
    Pda pda = oca_to_pda(a);
    SimToEnergyOutput mid = simulation_to_energy(pda, v);
    EnergyToSimOutput back = energy_to_simulation(mid.game);
    SimAnalysis front(&a, &v, caps(12, 12, 40));
    SimAnalysis rear(&back.left, &back.right, caps(13, 12, 40));
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) {
        Winner w1 = front.classify({OcaConf{0, m}, VassConf{0, {n}}});
        PegConf midPos =
            mid.map_position(oca_conf_to_pda(a, OcaConf{0, m}), VassConf{0, {n}});
        Winner w2 = rear.classify(back.map_position(midPos));
        if (w1 != Winner::Unknown && w2 != Winner::Unknown) {
          CHECK(w1 == w2);
          ++definite;
        }
      }
  }
  CHECK(definite > 50);
}

TEST_CASE("oca-to-ocn: a black line at residue zero gives Spoiler a free loop") {
  Oca a = corpus::neutral_loop_ocn();
  a.isNet = false;  // an OCA that happens to have no zero rules
  Oca b = corpus::neutral_loop_ocn();
  OcaToOcnParams params = uniform_params(a, b, 1, 1, 0, true);
  OcaOcnToOcnOcnOutput red = oca_ocn_to_ocn_ocn(a, b, params);
  bool found = false;
  for (const auto& r : red.left.rules)
    found |= r.src == red.pair_state(0, 0, 0) && r.dst == r.src && r.delta == 0 &&
             red.left.actions.name(r.action) == "$";
  CHECK(found);
  SimAnalysis sim(&red.left, &red.right, caps(10, 10, 40));
  for (int mp = 0; mp <= 5; ++mp)
    CHECK(sim.classify(red.map_position(0, 0, 0, mp)) == Winner::Win0);
}

TEST_CASE("oca-to-ocn: the boundary chain pays out exactly W steps") {
  Oca a = corpus::neutral_loop_ocn();
  a.isNet = false;
  Oca b = corpus::neutral_loop_ocn();
  OcaToOcnParams params = uniform_params(a, b, 1, 1, 3, false);
  OcaOcnToOcnOcnOutput red = oca_ocn_to_ocn_ocn(a, b, params);
  int chainEdges = 0;
  for (size_t i = 0; i < red.leftNotes.size(); ++i)
    chainEdges += red.leftNotes[i] == "boundary-chain";
  CHECK(chainEdges == 3);
  SimAnalysis sim(&red.left, &red.right, caps(12, 12, 60));
  CHECK(sim.classify(red.map_position(0, 0, 0, 2)) == Winner::Win0);
  CHECK(sim.classify(red.map_position(0, 0, 0, 3)) == Winner::Win1);
}

TEST_CASE("oca-to-ocn: staircase end-to-end iff on a grid") {
  Oca a = corpus::decrement_loop_ocn();
  a.isNet = false;
  Oca b = corpus::decrement_loop_ocn();
  // True coloring: White iff m' >= m, so W(i) = i and there are no black
  // lines; l = 1, K = 1 fits with W(1) = 1.
  OcaToOcnParams params = uniform_params(a, b, 1, 1, 1, false);
  OcaOcnToOcnOcnOutput red = oca_ocn_to_ocn_ocn(a, b, params);
  REQUIRE(validate(red.left).empty());
  REQUIRE(validate(red.right).empty());
  CHECK(red.left.isNet);
  CHECK(red.right.isNet);

  SimAnalysis source(&a, &b, caps(24, 24, 80));
  SimAnalysis target(&red.left, &red.right, caps(24, 24, 80));
  long long checked = 0;
  for (int m = 0; m <= 8; ++m)
    for (int mp = 0; mp <= 8; ++mp) {
      Winner lhs = source.classify({OcaConf{0, m + params.l}, OcaConf{0, mp}});
      Winner rhs = target.classify(red.map_position(0, 0, m, mp));
      if (lhs != Winner::Unknown && rhs != Winner::Unknown) {
        CHECK(lhs == rhs);
        ++checked;
      }
      if (lhs != Winner::Unknown)
        CHECK((lhs == Winner::Win1) == (mp >= m + params.l));
    }
  CHECK(checked > 60);
}

TEST_CASE("oca-to-ocn: provenance, sizes, and rejection of bad parameters") {
  Oca a;
  int p0 = a.states.declare("p0");
  int p1 = a.states.declare("p1");
  int act = a.actions.declare("a");
  a.rules.push_back({p0, act, -1, p1});
  a.rules.push_back({p1, act, 1, p0});
  a.zeroRules.push_back({p0, act, 0, p0});  // dropped by the construction
  Oca b = corpus::neutral_loop_ocn();
  b.rules.push_back({0, 0, 1, 0});  // a second reply makes mismatches possible

  OcaToOcnParams params = uniform_params(a, b, 2, 2, 1, false);
  params.wAtL[1] = kInfiniteW;
  params.blackLine[1 * 2 + 0] = 1;
  params.blackLine[1 * 2 + 1] = 1;
  OcaOcnToOcnOcnOutput red = oca_ocn_to_ocn_ocn(a, b, params);
  CHECK(note_set(red.leftNotes) ==
        std::set<std::string>{"announce", "confirm", "black-line-loop",
                              "boundary-chain"});
  CHECK(note_set(red.rightNotes) ==
        std::set<std::string>{"record-choice", "confirm-recorded",
                              "escape-mismatch", "dollar-drain",
                              "universal-loop"});

  int nL = 2, nR = 1, K = 2;
  long long chainStates = 0;
  for (int p = 0; p < nL; ++p)
    for (int q = 0; q < nR; ++q) {
      long long w = params.w(p, q);
      if (w != kInfiniteW) chainStates += w;
    }
  CHECK(red.left.states.declared_count() ==
        nL * nR * K + static_cast<int>(a.rules.size()) * nR * K +
            static_cast<int>(chainStates));
  int matching = 0;
  for (const auto& t : a.rules)
    for (const auto& tp : b.rules) matching += t.action == tp.action;
  CHECK(red.right.states.declared_count() == nL * nR * K + matching * K + 1);

  OcaToOcnParams bad = uniform_params(a, b, 0, 1, 1, false);
  CHECK_THROWS_AS(oca_ocn_to_ocn_ocn(a, b, bad), InconsistentParams);
  OcaToOcnParams inconsistent = uniform_params(a, b, 1, 1, 1, false);
  inconsistent.blackLine[0] = 1;  // black at residue 0 but finite W
  CHECK_THROWS_AS(oca_ocn_to_ocn_ocn(a, b, inconsistent), InconsistentParams);
}

TEST_CASE("position maps are injective on samples") {
  Oceg g;
  g.dimension = 1;
  int q0 = g.add_state("x", Owner::P0);
  int q1 = g.add_state("y", Owner::P1);
  g.rules.push_back({q0, 0, q1, {0}});
  g.rules.push_back({q1, 0, q0, {0}});
  Peg peg = oceg_to_peg(g);
  EnergyToSimOutput red = energy_to_simulation(peg);
  std::set<std::string> seen;
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c <= 3; ++c)
      for (int e = 0; e <= 3; ++e) {
        SimPair pr = red.map_position(oceg_conf_to_peg(OcegConf{s, c, {e}}));
        std::string key = oracle::lts_fmt(&red.left, pr.left) + "|" +
                          oracle::lts_fmt(&red.right, pr.right);
        CHECK(seen.insert(key).second);
      }
}
