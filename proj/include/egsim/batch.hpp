#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "egsim/io.hpp"
#include "egsim/models.hpp"
#include "egsim/reductions.hpp"
#include "egsim/solvers.hpp"

namespace egsim {

// Deterministic RNG for instance generation; engine output is specified by
// the standard, so same-seed runs are byte-identical.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t next() { return eng_(); }
  int below(int n) {  // uniform over [0, n)
    uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % static_cast<uint64_t>(n);
    uint64_t v;
    do
      v = eng_();
    while (v >= limit);
    return static_cast<int>(v % static_cast<uint64_t>(n));
  }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }
  bool chance(int pct) { return below(100) < pct; }

 private:
  std::mt19937_64 eng_;
};

uint64_t mix_seed(uint64_t seed, uint64_t index);

// Generation bias: small dense machines with full action overlap surface
// reduction bugs fastest; the knobs allow sparser regimes.
struct GenKnobs {
  int minStatesPerSide = 1;
  int maxStatesPerSide = 3;
  int maxOutPerState = 3;
  int actionCount = 2;
  int zeroRulePct = 35;
  int negEffectBiasPct = 25;
};

Oceg random_oceg(Rng&, const GenKnobs&, int dimension);
Oca random_oca(Rng&, const GenKnobs&, bool net);
Vass random_vass(Rng&, const GenKnobs&, int dimension);

enum class Agreement : uint8_t {
  Agree,
  LeftUnknown,
  RightUnknown,
  BothUnknown,
  Disagree
};
const char* to_string(Agreement);

struct BatchRow {
  int instance = 0;
  std::string operation;
  std::string position;
  Winner left = Winner::Unknown;
  Winner right = Winner::Unknown;
  Agreement agreement = Agreement::BothUnknown;
  std::string error;
};

struct BatchReport {
  std::string operation;
  uint64_t seed = 0;
  int instances = 0;
  Bounds bounds;
  std::vector<BatchRow> rows;
  long long agree = 0, leftUnknown = 0, rightUnknown = 0, bothUnknown = 0,
            disagree = 0, errors = 0;

  void add(BatchRow row);
  long long definite() const { return agree + disagree; }
  double definite_rate() const {
    size_t n = rows.size();
    return n == 0 ? 1.0 : static_cast<double>(definite()) / n;
  }
  bool passed() const { return disagree == 0 && errors == 0; }
  Json to_json() const;
  std::string serialize() const;
};

struct BatchSpec {
  // "energy-to-sim", "sim-to-energy", "round-trip", or "refine".
  std::string operation = "energy-to-sim";
  uint64_t seed = 1;
  int instances = 50;
  Bounds bounds{12, 12, 40};
  Bounds largerBounds{18, 18, 60};  // refine only
  int maxInitCounter = 3;
  int maxInitEnergy = 3;
  GenKnobs knobs;
};

// Executes the reduction-equivalence campaigns: verdicts on both sides of
// the reduction for every initial position, deterministic given the seed.
BatchReport run_batch(const BatchSpec&);

}  // namespace egsim
