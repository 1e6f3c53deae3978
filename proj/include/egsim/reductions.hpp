#pragma once

#include <string>
#include <vector>

#include "egsim/models.hpp"
#include "egsim/solvers.hpp"

namespace egsim {

// Energy game -> simulation game. The Spoiler plays on the pushdown
// automaton, the Duplicator on the VASS; game position (q, gamma, E)
// corresponds to the pair ((q, gamma), (q, E)). State ids of the input game
// are preserved as a prefix of both output state tables.
struct EnergyToSimOutput {
  Pda left;
  Vass right;
  std::vector<std::string> leftNotes;   // parallel to left.transitions
  std::vector<std::string> rightNotes;  // parallel to right.transitions
  std::vector<int> flaggedLeftStates;   // not control-reachable from any mapped position
  std::vector<int> flaggedRightStates;

  SimPair map_position(const PegConf& c) const {
    return {PdaConf{c.state, c.stack}, VassConf{c.state, c.energy}};
  }
};

EnergyToSimOutput energy_to_simulation(const Peg&);

// Simulation game -> energy game. Pair ((q0, gamma), (q1, E)) corresponds to
// position (pair(q0, q1), gamma, E).
struct SimToEnergyOutput {
  Peg game;
  std::vector<std::string> notes;
  std::vector<int> flaggedStates;
  int statesRight = 0;   // |Q_V|; pair(q0,q1) has id q0*statesRight+q1

  PegConf map_position(const PdaConf& l, const VassConf& r) const {
    return PegConf{l.state * statesRight + r.state, l.stack, r.counters};
  }
};

SimToEnergyOutput simulation_to_energy(const Pda&, const Vass&);

// Parameters of the OCA/OCN -> OCN/OCN compiler: the threshold l, period K,
// the W values at level l (kInfiniteW encodes an all-black line) and the
// black-line pattern for residues 0..K-1.
constexpr long long kInfiniteW = -1;

struct OcaToOcnParams {
  int l = 1;
  int K = 1;
  int statesLeft = 0, statesRight = 0;
  std::vector<long long> wAtL;     // (p*statesRight + p'), kInfiniteW = infinity
  std::vector<uint8_t> blackLine;  // (p*statesRight + p')*K + residue

  long long w(int p, int pPrime) const { return wAtL[p * statesRight + pPrime]; }
  bool black(int p, int pPrime, int residue) const {
    return blackLine[(p * statesRight + pPrime) * K + residue] != 0;
  }
};

struct OcaOcnToOcnOcnOutput {
  Oca left;   // OCN B
  Oca right;  // OCN B'
  std::vector<std::string> leftNotes, rightNotes;
  std::vector<int> flaggedLeftStates, flaggedRightStates;
  int l = 1, K = 1, statesRight = 0;

  // F/G: original position p(m+l) vs p'm' corresponds to the pair
  // (state(p,p',m mod K), m) vs (state(p,p',m mod K), m').
  int pair_state(int p, int pPrime, long long m) const {
    return (p * statesRight + pPrime) * K + static_cast<int>(m % K);
  }
  SimPair map_position(int p, int pPrime, long long m, long long mPrime) const {
    int s = pair_state(p, pPrime, m);
    return {OcaConf{s, static_cast<int>(m)}, OcaConf{s, static_cast<int>(mPrime)}};
  }
};

OcaOcnToOcnOcnOutput oca_ocn_to_ocn_ocn(const Oca& a, const Oca& aPrime,
                                        const OcaToOcnParams&);

}  // namespace egsim
