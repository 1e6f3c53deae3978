#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "egsim/models.hpp"

namespace egsim {

// Truncation parameters. counterCap bounds counters and stack heights,
// energyCap saturates energy coordinates, roundCap bounds the simulation
// approximant depth.
struct Bounds {
  int counterCap = 8;
  int energyCap = 8;
  int roundCap = 32;

  bool dominates(const Bounds& b) const {
    return counterCap >= b.counterCap && energyCap >= b.energyCap &&
           roundCap >= b.roundCap;
  }
};

long long default_position_budget();  // EGSIM_POSITION_BUDGET or 5e6

enum class Winner : uint8_t { Win0, Win1, Unknown };

const char* to_string(Winner);

struct StrategyEntry {
  std::string position;   // winner-owned position
  int transition = -1;    // chosen transition id
  std::string successor;  // resulting position
};

// Three-valued verdict. Win0/Win1 are sound for the unbounded game; the
// strategy, when present, is total on positions reachable under it within
// the bounds.
struct Verdict {
  Winner winner = Winner::Unknown;
  std::vector<StrategyEntry> strategy;
  Bounds boundsUsed;
  long long positionsExplored = 0;
};

// ---------------------------------------------------------------------------
// Energy games

Verdict solve_energy_bounded(const Peg&, const PegConf& init, const Bounds&,
                             long long positionBudget = 0);
Verdict solve_energy_bounded(const Oceg&, const OcegConf& init, const Bounds&,
                             long long positionBudget = 0);

// Shared arena for many initial positions of the same game at the same
// bounds. Verdicts are identical to one-shot solves.
class EnergyAnalysis {
 public:
  EnergyAnalysis(const Peg&, Bounds, long long positionBudget = 0);
  ~EnergyAnalysis();
  EnergyAnalysis(EnergyAnalysis&&) noexcept;
  Verdict solve(const PegConf& init);
  long long positions_explored() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Simulation games

using LtsRef = std::variant<const Pda*, const Oca*, const Vass*>;
using LtsConf = std::variant<PdaConf, OcaConf, VassConf>;

// Spoiler on the left, Duplicator on the right.
struct SimPair {
  LtsConf left;
  LtsConf right;
};

Verdict solve_simulation_bounded(LtsRef left, LtsRef right, const SimPair&,
                                 const Bounds&, long long positionBudget = 0);

class SimAnalysis {
 public:
  SimAnalysis(LtsRef left, LtsRef right, Bounds, long long positionBudget = 0);
  ~SimAnalysis();
  SimAnalysis(SimAnalysis&&) noexcept;
  Verdict solve(const SimPair&);
  // Batch interface: pre-explore many initial pairs at once, then read
  // verdicts without strategy extraction. Values are identical to solve().
  void prepare(const std::vector<SimPair>&);
  Winner classify(const SimPair&);
  long long positions_explored() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Refinement: re-solve with coordinatewise larger bounds. A definite
// previous verdict is never contradicted.

Verdict refine(const Verdict& previous, const Peg&, const PegConf& init,
               const Bounds& larger);
Verdict refine(const Verdict& previous, const Oceg&, const OcegConf& init,
               const Bounds& larger);
Verdict refine(const Verdict& previous, LtsRef left, LtsRef right,
               const SimPair&, const Bounds& larger);

}  // namespace egsim
