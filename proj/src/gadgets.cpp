#include "egsim/gadgets.hpp"

#include <algorithm>

namespace egsim {

PushdownGadget mcm_to_pushdown_energy(const Mcm& m) {
  require_valid(validate(m), "mcm");
  PushdownGadget out;
  Peg& g = out.game;
  g.dimension = 1;

  int ns = m.states.declared_count();
  for (int q = 0; q < ns; ++q) g.add_state(m.states.name(q), Owner::P1);
  out.initialState = m.initState;
  out.haltState = m.haltState;

  out.botSymbol = g.stackSymbols.declare("bot");

  // One record symbol and one accept state per edge of the transition graph.
  for (int q = 0; q < ns; ++q) {
    if (q == m.haltState || !m.rule[q]) continue;
    const McmRule& r = *m.rule[q];
    std::string cn = "c" + std::to_string(r.counter);
    if (r.kind == McmRule::Inc) {
      int sym = g.stackSymbols.declare("inc(" + m.states.name(q) + "," + cn + ")");
      int acc = g.add_state("s(inc(" + m.states.name(q) + "," + cn + "))", Owner::P0);
      out.records.push_back(
          {sym, PushdownGadget::RecKind::Inc, r.counter, q, r.dst, acc, -1});
    } else {
      int zsym = g.stackSymbols.declare("zero(" + m.states.name(q) + "," + cn + ")");
      int zacc =
          g.add_state("s(zero(" + m.states.name(q) + "," + cn + "))", Owner::P0);
      out.records.push_back(
          {zsym, PushdownGadget::RecKind::ZeroBranch, r.counter, q, r.dst, zacc, -1});
      int dsym = g.stackSymbols.declare("dec(" + m.states.name(q) + "," + cn + ")");
      int dacc =
          g.add_state("s(dec(" + m.states.name(q) + "," + cn + "))", Owner::P0);
      out.records.push_back({dsym, PushdownGadget::RecKind::PosBranch, r.counter,
                             q, r.dstPositive, dacc, -1});
    }
  }

  // Test gadgets, two kinds per counter that is ever tested. Kind 1 audits a
  // zero claim (wins iff the counter was positive), kind 2 a positive claim
  // (wins iff the counter was zero).
  int gadget[2][3];  // [kind-1][counter]
  for (auto& row : gadget) row[0] = row[1] = row[2] = -1;
  for (auto& rec : out.records) {
    if (rec.kind == PushdownGadget::RecKind::Inc) continue;
    int kind = rec.kind == PushdownGadget::RecKind::ZeroBranch ? 0 : 1;
    int& gs = gadget[kind][rec.counter];
    if (gs < 0)
      gs = g.add_state("test" + std::to_string(kind + 1) + "(c" +
                           std::to_string(rec.counter) + ")",
                       Owner::P0);
    rec.gadgetState = gs;
  }

  int nsym = g.stackSymbols.declared_count();
  auto all_symbols = [&] {
    std::vector<int> v(nsym);
    for (int i = 0; i < nsym; ++i) v[i] = i;
    return v;
  }();

  for (const auto& rec : out.records)
    for (int y : all_symbols) {
      g.transitions.push_back({rec.fromState, y, rec.acceptState, {rec.symbol, y}, {1}});
      out.notes.push_back("push-record");
    }
  for (const auto& rec : out.records)
    for (int y : all_symbols) {
      g.transitions.push_back({rec.acceptState, y, rec.toState, {y}, {0}});
      out.notes.push_back("accept");
    }
  for (int y : all_symbols) {
    g.transitions.push_back({m.haltState, y, m.haltState, {y}, {-1}});
    out.notes.push_back("halt-drain");
  }
  for (const auto& rec : out.records)
    if (rec.gadgetState >= 0) {
      g.transitions.push_back(
          {rec.acceptState, rec.symbol, rec.gadgetState, {rec.symbol}, {0}});
      out.notes.push_back("gadget-entry");
    }

  // Pop weights: in a kind-1 gadget for counter c, increments of c cost 2,
  // decrements are free, everything else costs 1; kind 2 swaps the roles of
  // increments and decrements. A cost-2 pop is compiled into two -1 steps.
  for (int kind = 0; kind < 2; ++kind)
    for (int c = 1; c <= 2; ++c) {
      int gs = gadget[kind][c];
      if (gs < 0) continue;
      for (const auto& rec : out.records) {
        bool incOfC = rec.kind == PushdownGadget::RecKind::Inc && rec.counter == c;
        bool decOfC =
            rec.kind == PushdownGadget::RecKind::PosBranch && rec.counter == c;
        int cost;
        if (kind == 0)
          cost = incOfC ? 2 : decOfC ? 0 : 1;
        else
          cost = decOfC ? 2 : incOfC ? 0 : 1;
        if (cost == 2) {
          int mid = g.add_state("drop(" + g.states.name(gs) + "," +
                                    g.stackSymbols.name(rec.symbol) + ")",
                                Owner::P0);
          g.transitions.push_back({gs, rec.symbol, mid, {rec.symbol}, {-1}});
          out.notes.push_back("pop-charge-2");
          g.transitions.push_back({mid, rec.symbol, gs, {}, {-1}});
          out.notes.push_back("pop-charge-2");
          for (int y : all_symbols)
            if (y != rec.symbol) {
              g.transitions.push_back({mid, y, mid, {y}, {0}});
              out.notes.push_back("guard-loop");
            }
        } else {
          g.transitions.push_back({gs, rec.symbol, gs, {}, {-cost}});
          out.notes.push_back(cost == 0 ? "pop-free" : "pop-charge-1");
        }
      }
      g.transitions.push_back({gs, out.botSymbol, m.initState, {out.botSymbol}, {0}});
      out.notes.push_back("gadget-return");
    }

  out.initial = PegConf{m.initState, {out.botSymbol}, {0}};
  return out;
}

OcnVassGadget mcm_to_ocn_vs_vass(const Mcm& m) {
  require_valid(validate(m), "mcm");
  OcnVassGadget out;
  Oca& A = out.ocn;
  Vass& V = out.vass;
  A.isNet = true;
  V.dimension = 2;

  int ns = m.states.declared_count();
  out.machineStates = ns;
  for (int q = 0; q < ns; ++q) {
    A.states.declare(m.states.name(q));
    V.states.declare(m.states.name(q));
  }
  int aA = A.actions.declare("a"), aV = V.actions.declare("a");
  int zA = A.actions.declare("z"), zV = V.actions.declare("z");
  int nzA = A.actions.declare("nz"), nzV = V.actions.declare("nz");
  int cA = A.actions.declare("c"), cV = V.actions.declare("c");
  int hA = A.actions.declare("h");
  V.actions.declare("h");

  auto unit = [](int counter, int sign) {
    std::vector<int> e{0, 0};
    e[counter - 1] = sign;
    return e;
  };
  std::vector<int> zero{0, 0};

  int chalA[3] = {-1, -1, -1}, chalV[3] = {-1, -1, -1};
  auto challenge_states = [&](int counter) {
    if (chalA[counter] < 0) {
      std::string n = "chal(c" + std::to_string(counter) + ")";
      chalA[counter] = A.states.declare(n);
      chalV[counter] = V.states.declare(n);
    }
  };
  int univ = V.states.declare("univ");

  for (int q = 0; q < ns; ++q) {
    if (q == m.haltState || !m.rule[q]) continue;
    const McmRule& r = *m.rule[q];
    if (r.kind == McmRule::Inc) {
      A.rules.push_back({q, aA, +1, r.dst});
      out.leftNotes.push_back("emulate-inc");
      V.transitions.push_back({q, aV, r.dst, unit(r.counter, +1)});
      out.rightNotes.push_back("emulate-inc");
      continue;
    }
    challenge_states(r.counter);
    int hat = A.states.declare("hat(" + m.states.name(q) + ")");
    int q1 = V.states.declare("claimZero(" + m.states.name(q) + ")");
    int q2 = V.states.declare("claimNonzero(" + m.states.name(q) + ")");
    A.rules.push_back({q, aA, 0, hat});
    out.leftNotes.push_back("announce-test");
    V.transitions.push_back({q, aV, q1, zero});
    out.rightNotes.push_back("claim-zero");
    V.transitions.push_back({q, aV, q2, unit(r.counter, -1)});
    out.rightNotes.push_back("claim-nonzero");
    A.rules.push_back({hat, nzA, -1, r.dstPositive});
    out.leftNotes.push_back("accept-nonzero");
    V.transitions.push_back({q2, nzV, r.dstPositive, zero});
    out.rightNotes.push_back("accept-nonzero");
    A.rules.push_back({hat, zA, 0, r.dst});
    out.leftNotes.push_back("accept-zero");
    V.transitions.push_back({q1, zV, r.dst, zero});
    out.rightNotes.push_back("accept-zero");
    V.transitions.push_back({q2, zV, univ, zero});
    out.rightNotes.push_back("punish-wrong-accept");
    V.transitions.push_back({q1, nzV, univ, zero});
    out.rightNotes.push_back("punish-wrong-accept");
    A.rules.push_back({hat, cA, 0, chalA[r.counter]});
    out.leftNotes.push_back("challenge");
    V.transitions.push_back({q1, cV, chalV[r.counter], zero});
    out.rightNotes.push_back("challenge");
    V.transitions.push_back({q2, cV, univ, zero});
    out.rightNotes.push_back("punish-wrong-challenge");
  }
  for (int c = 1; c <= 2; ++c)
    if (chalA[c] >= 0) {
      A.rules.push_back({chalA[c], cA, -1, chalA[c]});
      out.leftNotes.push_back("challenge-eval");
      V.transitions.push_back({chalV[c], cV, chalV[c], unit(3 - c, -1)});
      out.rightNotes.push_back("challenge-eval");
    }
  A.rules.push_back({m.haltState, hA, 0, m.haltState});
  out.leftNotes.push_back("halt-detect");
  for (int act = 0; act < V.actions.declared_count(); ++act) {
    V.transitions.push_back({univ, act, univ, zero});
    out.rightNotes.push_back("universal-loop");
  }

  out.leftInit = OcaConf{m.initState, 0};
  out.rightInit = VassConf{m.initState, {0, 0}};
  return out;
}

}  // namespace egsim
