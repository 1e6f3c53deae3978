#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egsim/coloring.hpp"
#include "egsim/models.hpp"
#include "egsim/reductions.hpp"
#include "egsim/solvers.hpp"

namespace egsim {

// Ultimately periodic coloring: an explicit window over [0,M] x [0,M'] per
// state pair; colors outside the window are obtained by folding coordinates
// above the thresholds back by the periods. Denotes a semilinear candidate
// simulation relation.
struct Upc {
  int thresholdM = 0;
  int periodM = 1;
  int thresholdMPrime = 0;
  int periodMPrime = 1;
  int statesLeft = 0, statesRight = 0;
  std::vector<std::string> leftNames, rightNames;
  std::vector<uint8_t> declared;              // per (p*statesRight+q)
  std::vector<std::vector<uint8_t>> windows;  // per pair, m-major; 1 = White

  bool is_declared(int p, int q) const {
    int i = p * statesRight + q;
    return i >= 0 && i < static_cast<int>(declared.size()) && declared[i];
  }
  int fold_m(long long m) const {
    if (m <= thresholdM) return static_cast<int>(m);
    long long base = thresholdM - periodM + 1;
    return static_cast<int>(base + (m - base) % periodM);
  }
  int fold_mp(long long mp) const {
    if (mp <= thresholdMPrime) return static_cast<int>(mp);
    long long base = thresholdMPrime - periodMPrime + 1;
    return static_cast<int>(base + (mp - base) % periodMPrime);
  }
};

// Total membership lookup; throws UnknownPair for undeclared pairs.
Cell upc_color(const Upc&, int p, int q, long long m, long long mPrime);

// Structural invariants: periods fit inside the window, columns are monotone
// after folding (White stays White upward, including across the vertical
// seam).
std::vector<Violation> validate_upc(const Upc&);

struct MustPoint {
  int p = 0;
  long long m = 0;
  int q = 0;
  long long mPrime = 0;
};

struct CheckResult {
  bool accepted = true;
  std::string reason;  // "RequiredPairNotIncluded" or "UnmatchedStep"
  int p = -1, q = -1;
  long long m = 0, mPrime = 0;
  int spoilerTransition = -1;
};

// Verifies the simulation closure condition at every point of the finite
// test window [0, M+2P] x [0, M'+2P'] per pair (sound for all points: steps
// move counters by at most one, so points beyond the window fold onto
// isomorphic representatives), plus the mustContain points.
CheckResult check_simulation_candidate(const Oca& a, const Oca& aPrime,
                                       const Upc&,
                                       const std::vector<MustPoint>& mustContain);

// Distills a grid plus detected parameters into a UPC: explicit window up to
// (l+2K, max finite WhiteFrom + 2), horizontal period K, vertical period 1.
// Empty when Unknown cells intrude or fold consistency fails.
std::optional<Upc> coloring_to_upc(const ColorGrid&, const OcaToOcnParams&);

struct DecideBudget {
  int maxWindow = 2;
  int maxPeriod = 2;
  Bounds solverBounds;  // ceiling for the growing negative rounds
  double wallClockSeconds = 120.0;
  // Deterministic schedule knobs (the wall clock is a coarse safety abort).
  int rounds = 4;
  long long maxCandidates = 20000;
};

struct DecideResult {
  Winner winner = Winner::Unknown;
  std::optional<Upc> certificate;       // present iff winner == Win1
  std::vector<StrategyEntry> strategy;  // present iff winner == Win0
  std::string note;
  long long candidatesTried = 0;
};

// Theorem-2-style combination of the two semi-decision procedures at desk
// scale: growing-bounds refutation search interleaved with candidate UPCs
// from grid distillation and a budgeted enumeration of small UPCs. Never
// returns an uncertified answer.
DecideResult enumerate_and_decide(const Oca& a, const Oca& aPrime,
                                  const OcaConf& left, const OcaConf& right,
                                  const DecideBudget&);

}  // namespace egsim
