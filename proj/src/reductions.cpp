#include "egsim/reductions.hpp"

#include <algorithm>
#include <deque>

namespace egsim {

namespace {

// Control-graph reachability: which states are not reachable from the seeds,
// ignoring counters and stack contents.
std::vector<int> unreached(int nStates, const std::vector<std::pair<int, int>>& edges,
                           int seedCount) {
  std::vector<std::vector<int>> adj(nStates);
  for (auto [s, d] : edges) adj[s].push_back(d);
  std::vector<char> seen(nStates, 0);
  std::deque<int> queue;
  for (int i = 0; i < seedCount; ++i) {
    seen[i] = 1;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int d : adj[q])
      if (!seen[d]) {
        seen[d] = 1;
        queue.push_back(d);
      }
  }
  std::vector<int> out;
  for (int i = 0; i < nStates; ++i)
    if (!seen[i]) out.push_back(i);
  return out;
}

}  // namespace

EnergyToSimOutput energy_to_simulation(const Peg& g) {
  require_valid(validate(g), "pushdown energy game");
  EnergyToSimOutput out;
  Pda& A = out.left;
  Vass& V = out.right;
  V.dimension = g.dimension;

  int nStates = g.states.declared_count();
  int nSym = g.stackSymbols.declared_count();
  // Game states keep their ids in both machines.
  for (int q = 0; q < nStates; ++q) {
    A.states.declare(g.states.name(q));
    V.states.declare(g.states.name(q));
  }
  for (int x = 0; x < nSym; ++x) A.stackSymbols.declare(g.stackSymbols.name(x));
  A.maxPush = g.maxPush;

  // One action per game transition, one per stack symbol, plus a spare.
  std::vector<int> actT(g.transitions.size());
  std::vector<int> actX(nSym);
  for (size_t i = 0; i < g.transitions.size(); ++i) {
    std::string n = "t" + std::to_string(i);
    actT[i] = A.actions.declare(n);
    V.actions.declare(n);
  }
  for (int x = 0; x < nSym; ++x) {
    std::string n = "top(" + g.stackSymbols.name(x) + ")";
    actX[x] = A.actions.declare(n);
    V.actions.declare(n);
  }
  A.actions.declare("a");
  V.actions.declare("a");
  int nAct = A.actions.declared_count();

  std::vector<int> hat(nStates, -1);
  for (int q = 0; q < nStates; ++q)
    if (g.owner[q] == Owner::P1)
      hat[q] = A.states.declare("hat(" + g.states.name(q) + ")");
  std::vector<int> choice(g.transitions.size(), -1);
  for (size_t i = 0; i < g.transitions.size(); ++i)
    if (g.owner[g.transitions[i].src] == Owner::P1)
      choice[i] = V.states.declare("choice(t" + std::to_string(i) + ")");
  int univ = V.states.declare("univ");

  std::vector<int> zero(g.dimension, 0);

  for (size_t i = 0; i < g.transitions.size(); ++i) {
    const PegTransition& t = g.transitions[i];
    if (g.owner[t.src] == Owner::P0) {
      A.transitions.push_back({t.src, t.top, actT[i], t.dst, t.push});
      out.leftNotes.push_back("spoiler-emulates");
      V.transitions.push_back({t.src, actT[i], t.dst, t.effect});
      out.rightNotes.push_back("follow-chosen");
    } else {
      V.transitions.push_back({t.src, actX[t.top], choice[i], t.effect});
      out.rightNotes.push_back("choose");
      A.transitions.push_back({hat[t.src], t.top, actT[i], t.dst, t.push});
      out.leftNotes.push_back("implement-choice");
      V.transitions.push_back({choice[i], actT[i], t.dst, zero});
      out.rightNotes.push_back("confirm");
      for (int b = 0; b < nAct; ++b)
        if (b != actT[i]) {
          V.transitions.push_back({choice[i], b, univ, zero});
          out.rightNotes.push_back("escape-mismatch");
        }
    }
  }
  for (int q = 0; q < nStates; ++q)
    if (g.owner[q] == Owner::P1)
      for (int x = 0; x < nSym; ++x) {
        A.transitions.push_back({q, x, actX[x], hat[q], {x}});
        out.leftNotes.push_back("announce-top");
      }
  for (int c = 0; c < nAct; ++c) {
    V.transitions.push_back({univ, c, univ, zero});
    out.rightNotes.push_back("universal-loop");
  }

  std::vector<std::pair<int, int>> la, lv;
  for (const auto& t : A.transitions) la.push_back({t.src, t.dst});
  for (const auto& t : V.transitions) lv.push_back({t.src, t.dst});
  out.flaggedLeftStates = unreached(A.states.declared_count(), la, nStates);
  out.flaggedRightStates = unreached(V.states.declared_count(), lv, nStates);
  return out;
}

SimToEnergyOutput simulation_to_energy(const Pda& a, const Vass& v) {
  require_valid(validate(a), "pda");
  require_valid(validate(v), "vass");
  SimToEnergyOutput out;
  Peg& G = out.game;
  G.dimension = v.dimension;
  G.maxPush = a.maxPush;
  int nA = a.states.declared_count();
  int nV = v.states.declared_count();
  out.statesRight = nV;

  // Shared action alphabet, by name.
  NameTable shared;
  std::vector<int> mapA(a.actions.declared_count()), mapV(v.actions.declared_count());
  for (int i = 0; i < a.actions.declared_count(); ++i)
    mapA[i] = shared.declare(a.actions.name(i));
  for (int i = 0; i < v.actions.declared_count(); ++i)
    mapV[i] = shared.declare(v.actions.name(i));
  int nAct = shared.declared_count();

  // P0 states pair(q0,q1) first so map_position is id arithmetic.
  for (int q0 = 0; q0 < nA; ++q0)
    for (int q1 = 0; q1 < nV; ++q1)
      G.add_state("pair(" + a.states.name(q0) + "," + v.states.name(q1) + ")",
                  Owner::P0);
  auto reply_state = [&](int q0, int q1, int act) {
    return nA * nV + (q0 * nV + q1) * nAct + act;
  };
  for (int q0 = 0; q0 < nA; ++q0)
    for (int q1 = 0; q1 < nV; ++q1)
      for (int c = 0; c < nAct; ++c)
        G.add_state("reply(" + a.states.name(q0) + "," + v.states.name(q1) + "," +
                        shared.name(c) + ")",
                    Owner::P1);
  int nSym = a.stackSymbols.declared_count();
  for (int x = 0; x < nSym; ++x) G.stackSymbols.declare(a.stackSymbols.name(x));

  std::vector<int> zero(G.dimension, 0);
  std::vector<int> drain(G.dimension, -1);

  for (const auto& t : a.transitions)
    for (int q1 = 0; q1 < nV; ++q1) {
      G.transitions.push_back({t.src * nV + q1, t.top,
                               reply_state(t.dst, q1, mapA[t.action]), t.push, zero});
      out.notes.push_back("spoiler-step");
    }
  for (const auto& t : v.transitions)
    for (int q0 = 0; q0 < nA; ++q0)
      for (int x = 0; x < nSym; ++x) {
        G.transitions.push_back({reply_state(q0, t.src, mapV[t.action]), x,
                                 q0 * nV + t.dst, {x}, t.effect});
        out.notes.push_back("duplicator-step");
      }
  for (int q = 0; q < G.states.declared_count(); ++q)
    for (int x = 0; x < nSym; ++x) {
      bool p0 = G.owner[q] == Owner::P0;
      G.transitions.push_back({q, x, q, {x}, p0 ? zero : drain});
      out.notes.push_back(p0 ? "idle-loop" : "drain-loop");
    }

  std::vector<std::pair<int, int>> edges;
  for (const auto& t : G.transitions) edges.push_back({t.src, t.dst});
  out.flaggedStates = unreached(G.states.declared_count(), edges, nA * nV);
  return out;
}

OcaOcnToOcnOcnOutput oca_ocn_to_ocn_ocn(const Oca& a, const Oca& aPrime,
                                        const OcaToOcnParams& params) {
  require_valid(validate(a), "oca");
  require_valid(validate(aPrime), "ocn");
  if (!aPrime.isNet || !aPrime.zeroRules.empty())
    throw InvalidModel("right-hand machine must be a one-counter net");
  int nL = a.states.declared_count();
  int nR = aPrime.states.declared_count();
  if (params.l < 1 || params.K < 1) throw InconsistentParams("l and K must be >= 1");
  if (params.statesLeft != nL || params.statesRight != nR ||
      static_cast<int>(params.wAtL.size()) != nL * nR ||
      static_cast<int>(params.blackLine.size()) != nL * nR * params.K)
    throw InconsistentParams("parameter tables do not match the machines");
  for (int p = 0; p < nL; ++p)
    for (int q = 0; q < nR; ++q) {
      long long w = params.w(p, q);
      if ((w == kInfiniteW) != params.black(p, q, 0))
        throw InconsistentParams("wAtL and blackLine disagree at level l for " +
                                 a.states.name(p) + "," + aPrime.states.name(q));
      if (w != kInfiniteW && w < 0) throw InconsistentParams("negative W value");
    }

  OcaOcnToOcnOcnOutput out;
  out.l = params.l;
  out.K = params.K;
  out.statesRight = nR;
  Oca& B = out.left;
  Oca& Bp = out.right;
  B.isNet = Bp.isNet = true;
  int K = params.K;

  // Pair states first, identically in both machines.
  for (int p = 0; p < nL; ++p)
    for (int q = 0; q < nR; ++q)
      for (int r = 0; r < K; ++r) {
        std::string n = "pair(" + a.states.name(p) + "," + aPrime.states.name(q) +
                        "," + std::to_string(r) + ")";
        B.states.declare(n);
        Bp.states.declare(n);
      }

  // Actions: one per Spoiler rule, one per Duplicator rule, plus $.
  std::vector<int> actT(a.rules.size()), actS(aPrime.rules.size());
  for (size_t i = 0; i < a.rules.size(); ++i) {
    std::string n = "t" + std::to_string(i);
    actT[i] = B.actions.declare(n);
    Bp.actions.declare(n);
  }
  for (size_t j = 0; j < aPrime.rules.size(); ++j) {
    std::string n = "s" + std::to_string(j);
    actS[j] = B.actions.declare(n);
    Bp.actions.declare(n);
  }
  int dollar = B.actions.declare("$");
  Bp.actions.declare("$");

  auto pairId = [&](int p, int q, int r) { return (p * nR + q) * K + r; };

  // Spoiler-side auxiliary states mid(t,q',n).
  std::vector<int> mid(a.rules.size() * nR * K, -1);
  auto midId = [&](size_t i, int q, int n) -> int& {
    return mid[(i * nR + q) * K + n];
  };
  for (size_t i = 0; i < a.rules.size(); ++i)
    for (int q = 0; q < nR; ++q)
      for (int n = 0; n < K; ++n)
        midId(i, q, n) = B.states.declare("mid(t" + std::to_string(i) + "," +
                                          aPrime.states.name(q) + "," +
                                          std::to_string(n) + ")");

  // Duplicator-side auxiliary states rec(t,t',n), for action-matching rules.
  std::vector<int> rec(a.rules.size() * aPrime.rules.size() * K, -1);
  auto recId = [&](size_t i, size_t j, int n) -> int& {
    return rec[(i * aPrime.rules.size() + j) * K + n];
  };
  for (size_t i = 0; i < a.rules.size(); ++i)
    for (size_t j = 0; j < aPrime.rules.size(); ++j) {
      if (aPrime.rules[j].action != a.rules[i].action) continue;
      for (int n = 0; n < K; ++n)
        recId(i, j, n) = Bp.states.declare("rec(t" + std::to_string(i) + ",s" +
                                           std::to_string(j) + "," +
                                           std::to_string(n) + ")");
    }
  int univ = Bp.states.declare("univ");

  // Emulation: Spoiler announces her rule, Duplicator records his reply,
  // Spoiler must repeat the recorded reply or Duplicator escapes to univ.
  for (int p = 0; p < nL; ++p)
    for (int q = 0; q < nR; ++q)
      for (int r = 0; r < K; ++r) {
        for (size_t i = 0; i < a.rules.size(); ++i) {
          const OcaRule& t = a.rules[i];
          if (t.src != p) continue;
          int n = ((r + t.delta) % K + K) % K;
          B.rules.push_back({pairId(p, q, r), actT[i], t.delta, midId(i, q, n)});
          out.leftNotes.push_back("announce");
          for (size_t j = 0; j < aPrime.rules.size(); ++j) {
            const OcaRule& tp = aPrime.rules[j];
            if (tp.src != q || tp.action != t.action) continue;
            Bp.rules.push_back({pairId(p, q, r), actT[i], tp.delta, recId(i, j, n)});
            out.rightNotes.push_back("record-choice");
          }
        }
      }
  for (size_t i = 0; i < a.rules.size(); ++i) {
    const OcaRule& t = a.rules[i];
    for (int q = 0; q < nR; ++q)
      for (int n = 0; n < K; ++n)
        for (size_t j = 0; j < aPrime.rules.size(); ++j) {
          const OcaRule& tp = aPrime.rules[j];
          if (tp.src != q || tp.action != t.action) continue;
          B.rules.push_back({midId(i, q, n), actS[j], 0, pairId(t.dst, tp.dst, n)});
          out.leftNotes.push_back("confirm");
          Bp.rules.push_back({recId(i, j, n), actS[j], 0, pairId(t.dst, tp.dst, n)});
          out.rightNotes.push_back("confirm-recorded");
          for (size_t j2 = 0; j2 < aPrime.rules.size(); ++j2)
            if (j2 != j) {
              Bp.rules.push_back({recId(i, j, n), actS[j2], 0, univ});
              out.rightNotes.push_back("escape-mismatch");
            }
        }
  }

  // The $ machinery: Duplicator pays one counter unit per $; Spoiler has a
  // free $ loop exactly on black lines, and from residue-0 pair states a
  // chain of exactly W decrementing steps.
  for (int p = 0; p < nL; ++p)
    for (int q = 0; q < nR; ++q) {
      for (int r = 0; r < K; ++r) {
        Bp.rules.push_back({pairId(p, q, r), dollar, -1, pairId(p, q, r)});
        out.rightNotes.push_back("dollar-drain");
        if (params.black(p, q, r)) {
          B.rules.push_back({pairId(p, q, r), dollar, 0, pairId(p, q, r)});
          out.leftNotes.push_back("black-line-loop");
        }
      }
      long long w = params.w(p, q);
      if (w != kInfiniteW && w > 0) {
        int prev = pairId(p, q, 0);
        for (long long j = w - 1; j >= 0; --j) {
          int s = B.states.declare("chain(" + a.states.name(p) + "," +
                                   aPrime.states.name(q) + "," + std::to_string(j) +
                                   ")");
          B.rules.push_back({prev, dollar, 0, s});
          out.leftNotes.push_back("boundary-chain");
          prev = s;
        }
      }
    }
  for (int c = 0; c < Bp.actions.declared_count(); ++c) {
    Bp.rules.push_back({univ, c, 0, univ});
    out.rightNotes.push_back("universal-loop");
  }

  std::vector<std::pair<int, int>> lb, lbp;
  for (const auto& t : B.rules) lb.push_back({t.src, t.dst});
  for (const auto& t : Bp.rules) lbp.push_back({t.src, t.dst});
  out.flaggedLeftStates = unreached(B.states.declared_count(), lb, nL * nR * K);
  out.flaggedRightStates = unreached(Bp.states.declared_count(), lbp, nL * nR * K);
  return out;
}

}  // namespace egsim
