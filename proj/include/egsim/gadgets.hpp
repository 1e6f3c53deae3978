#pragma once

#include <string>
#include <vector>

#include "egsim/models.hpp"

namespace egsim {

enum class ExpectedRelation : uint8_t { HaltsIffP0Wins, HaltsIffNotSimulates };

// The 1-dimensional pushdown energy game compiled from a 2-counter machine:
// Player 1 proposes the machine's run by pushing transition records, Player 0
// audits claimed counter tests by popping the history under weighted rules.
struct PushdownGadget {
  Peg game;
  PegConf initial;  // (initState, [bot], (0)); set the credit before solving
  ExpectedRelation expected = ExpectedRelation::HaltsIffP0Wins;
  std::vector<std::string> notes;  // parallel to game.transitions

  enum class RecKind : uint8_t { Inc, ZeroBranch, PosBranch };
  struct Record {
    int symbol;     // stack symbol of the pushed record
    RecKind kind;
    int counter;    // 1 or 2
    int fromState;  // machine states (ids preserved from the MCM)
    int toState;
    int acceptState;  // the P0 state reached right after the push
    int gadgetState;  // test gadget this record can be challenged in; -1 for Inc
  };
  std::vector<Record> records;
  int botSymbol = 0;
  int initialState = 0;
  int haltState = 0;
};

PushdownGadget mcm_to_pushdown_energy(const Mcm&);

// The OCN vs 2-dimensional VASS simulation instance compiled from a
// 2-counter machine: the OCN counter carries the sum of the VASS counters
// along faithful emulations; the machine halts iff Spoiler wins.
struct OcnVassGadget {
  Oca ocn;    // Spoiler side (a net)
  Vass vass;  // Duplicator side, dimension 2
  OcaConf leftInit;
  VassConf rightInit;
  ExpectedRelation expected = ExpectedRelation::HaltsIffNotSimulates;
  std::vector<std::string> leftNotes, rightNotes;
  int machineStates = 0;  // machine state ids are preserved in both machines
};

OcnVassGadget mcm_to_ocn_vs_vass(const Mcm&);

}  // namespace egsim
