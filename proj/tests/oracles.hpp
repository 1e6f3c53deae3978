#pragma once

// Test-only oracles: naive, independent expansions of the definitions, used
// to cross-check the library implementations. Nothing here shares code with
// the solvers.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "egsim/models.hpp"
#include "egsim/solvers.hpp"

namespace oracle {

using namespace egsim;

// Straight-off-the-definition successor enumerations.
inline std::vector<std::pair<int, OcaConf>> oca_steps(const Oca& m,
                                                      const OcaConf& c) {
  std::vector<std::pair<int, OcaConf>> out;
  for (const auto& r : m.rules)
    if (r.src == c.state && c.counter + r.delta >= 0)
      out.push_back({r.action, {r.dst, c.counter + r.delta}});
  if (c.counter == 0)
    for (const auto& r : m.zeroRules)
      if (r.src == c.state) out.push_back({r.action, {r.dst, r.delta}});
  return out;
}

inline std::vector<std::pair<int, VassConf>> vass_steps(const Vass& m,
                                                        const VassConf& c) {
  std::vector<std::pair<int, VassConf>> out;
  for (const auto& t : m.transitions) {
    if (t.src != c.state) continue;
    VassConf n{t.dst, c.counters};
    bool ok = true;
    for (size_t d = 0; d < n.counters.size(); ++d) {
      n.counters[d] += t.effect[d];
      ok &= n.counters[d] >= 0;
    }
    if (ok) out.push_back({t.action, n});
  }
  return out;
}

inline std::vector<OcegConf> oceg_moves(const Oceg& g, const OcegConf& c) {
  std::vector<OcegConf> out;
  for (int e : c.energy)
    if (e < 0) return out;
  for (const auto& r : g.rules) {
    if (r.src != c.state || c.counter + r.counterDelta < 0) continue;
    OcegConf n{r.dst, c.counter + r.counterDelta, c.energy};
    for (int d = 0; d < g.dimension; ++d) n.energy[d] += r.effect[d];
    out.push_back(n);
  }
  if (c.counter == 0)
    for (const auto& r : g.zeroRules) {
      if (r.src != c.state) continue;
      OcegConf n{r.dst, r.counterDelta, c.energy};
      for (int d = 0; d < g.dimension; ++d) n.energy[d] += r.effect[d];
      out.push_back(n);
    }
  return out;
}

// Dense three-valued simulation approximant table between an OCA and an OCN,
// restricted to counters <= cap. Successors beyond the cap contribute
// Unknown; a definite value (True at stabilization, False ever) is a sound
// answer for the unbounded game.
struct SimTable {
  enum Value : uint8_t { False = 0, Unknown = 1, True = 2 };
  int statesLeft = 0, statesRight = 0, cap = 0;
  bool stabilized = false;
  int roundsUsed = 0;
  std::vector<uint8_t> v;
  std::vector<int> falseRound;  // 0 = never became False

  size_t idx(int p, int m, int q, int mp) const {
    return ((static_cast<size_t>(p) * (cap + 1) + m) * statesRight + q) *
               (cap + 1) +
           mp;
  }
  Value at(int p, int m, int q, int mp) const {
    return static_cast<Value>(v[idx(p, m, q, mp)]);
  }
};

inline SimTable sim_table(const Oca& a, const Oca& b, int cap, int maxRounds) {
  SimTable t;
  t.statesLeft = a.states.declared_count();
  t.statesRight = b.states.declared_count();
  t.cap = cap;
  size_t n = static_cast<size_t>(t.statesLeft) * t.statesRight * (cap + 1) * (cap + 1);
  t.v.assign(n, SimTable::True);
  t.falseRound.assign(n, 0);

  auto actName = [](const Oca& m, int act) { return m.actions.name(act); };
  for (int round = 1; round <= maxRounds; ++round) {
    std::vector<uint8_t> next(n);
    bool changed = false;
    for (int p = 0; p < t.statesLeft; ++p)
      for (int m = 0; m <= cap; ++m)
        for (int q = 0; q < t.statesRight; ++q)
          for (int mp = 0; mp <= cap; ++mp) {
            uint8_t conj = SimTable::True;
            for (const auto& [act, dst] : oca_steps(a, {p, m})) {
              uint8_t disj;
              if (dst.counter > cap) {
                // Spoiler escapes the table: unknown unless Duplicator has
                // no reply at all.
                bool any = false;
                for (const auto& [ract, rdst] : oca_steps(b, {q, mp}))
                  any |= actName(b, ract) == actName(a, act);
                disj = any ? SimTable::Unknown : SimTable::False;
              } else {
                disj = SimTable::False;
                for (const auto& [ract, rdst] : oca_steps(b, {q, mp})) {
                  if (actName(b, ract) != actName(a, act)) continue;
                  uint8_t val = rdst.counter > cap
                                    ? SimTable::Unknown
                                    : t.v[t.idx(dst.state, dst.counter,
                                                rdst.state, rdst.counter)];
                  disj = std::max(disj, val);
                  if (disj == SimTable::True) break;
                }
              }
              conj = std::min(conj, disj);
              if (conj == SimTable::False) break;
            }
            size_t i = t.idx(p, m, q, mp);
            next[i] = conj;
            if (conj == SimTable::False && t.falseRound[i] == 0)
              t.falseRound[i] = round;
            changed |= conj != t.v[i];
          }
    t.v.swap(next);
    t.roundsUsed = round;
    if (!changed) {
      t.stabilized = true;
      break;
    }
  }
  return t;
}

// Generic step enumeration over the solver-facing machine views, used by the
// strategy replayer.
inline std::vector<std::tuple<std::string, int, LtsConf>> lts_steps(
    LtsRef m, const LtsConf& c) {
  std::vector<std::tuple<std::string, int, LtsConf>> out;
  if (std::holds_alternative<const Pda*>(m)) {
    const Pda* p = std::get<const Pda*>(m);
    for (const auto& s : steps(*p, std::get<PdaConf>(c)))
      out.push_back({p->actions.name(s.action), s.transition, s.to});
  } else if (std::holds_alternative<const Oca*>(m)) {
    const Oca* p = std::get<const Oca*>(m);
    for (const auto& s : steps(*p, std::get<OcaConf>(c)))
      out.push_back({p->actions.name(s.action), s.transition, s.to});
  } else {
    const Vass* p = std::get<const Vass*>(m);
    for (const auto& s : steps(*p, std::get<VassConf>(c)))
      out.push_back({p->actions.name(s.action), s.transition, s.to});
  }
  return out;
}

inline std::string lts_fmt(LtsRef m, const LtsConf& c) {
  if (std::holds_alternative<const Pda*>(m))
    return format_conf(*std::get<const Pda*>(m), std::get<PdaConf>(c));
  if (std::holds_alternative<const Oca*>(m))
    return format_conf(*std::get<const Oca*>(m), std::get<OcaConf>(c));
  return format_conf(*std::get<const Vass*>(m), std::get<VassConf>(c));
}

// Replays a Spoiler strategy move-by-move against an exhaustive Duplicator
// response search; true iff every branch reaches a Duplicator deadlock
// within maxRounds.
inline bool replay_spoiler(LtsRef left, LtsRef right, const SimPair& init,
                           const std::vector<StrategyEntry>& strategy,
                           int maxRounds) {
  std::map<std::string, int> byPos;
  for (const auto& e : strategy) byPos[e.position] = e.transition;
  struct Node {
    LtsConf l, r;
    int depth;
  };
  std::vector<Node> stack{{init.left, init.right, 0}};
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    if (nd.depth > maxRounds) return false;
    std::string key = lts_fmt(left, nd.l) + " vs " + lts_fmt(right, nd.r);
    auto it = byPos.find(key);
    if (it == byPos.end()) return false;  // strategy not total on the play
    // Spoiler's chosen move.
    std::string action;
    LtsConf target;
    bool found = false;
    for (const auto& [act, trans, to] : lts_steps(left, nd.l))
      if (trans == it->second) {
        action = act;
        target = to;
        found = true;
        break;
      }
    if (!found) return false;
    // All Duplicator responses must be losing too.
    for (const auto& [act, trans, to] : lts_steps(right, nd.r)) {
      if (act != action) continue;
      stack.push_back({target, to, nd.depth + 1});
    }
    // A response-less move is an immediate win on this branch.
  }
  return true;
}

}  // namespace oracle
