#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egsim/models.hpp"
#include "egsim/reductions.hpp"
#include "egsim/solvers.hpp"

namespace egsim {

enum class Cell : uint8_t { White, Black, Unknown };

inline char cell_char(Cell c) {
  return c == Cell::White ? 'W' : c == Cell::Black ? 'B' : '?';
}

// Per state-pair plane of bounded-simulation verdicts over the grid
// (m <= mMax) x (m' <= mPrimeMax): White = simulates, Black = does not.
struct ColorGrid {
  int statesLeft = 0, statesRight = 0;
  int mMax = 0, mPrimeMax = 0;
  Bounds boundsUsed;
  std::vector<std::string> leftNames, rightNames;
  std::vector<Cell> cells;  // ((p*statesRight+q)*(mMax+1)+m)*(mPrimeMax+1)+m'

  size_t idx(int p, int q, int m, int mp) const {
    return (static_cast<size_t>(p * statesRight + q) * (mMax + 1) + m) *
               (mPrimeMax + 1) +
           mp;
  }
  Cell at(int p, int q, int m, int mp) const { return cells[idx(p, q, m, mp)]; }
  int planes() const { return statesLeft * statesRight; }
};

ColorGrid compute_coloring(const Oca& a, const Oca& aPrime, int mMax,
                           int mPrimeMax, const Bounds& solverBounds,
                           bool useMonotoneFill = true);

struct LineSummary {
  enum Status : uint8_t { BlackWithinGrid, WhiteFrom, Inconclusive } status =
      Inconclusive;
  int w = 0;  // meaningful iff status == WhiteFrom
};

// Summary of the vertical line at level i per pair; indexed
// (p*statesRight+q)*(mMax+1)+i.
std::vector<LineSummary> line_summaries(const ColorGrid&);

// Candidate (l, K) periodicity detection; empty when no stable pattern fits
// the definite window.
std::optional<OcaToOcnParams> detect_periodic_parameters(const ColorGrid&);

enum class RenderFormat { Ascii, Pgm };
std::string render_grid(const ColorGrid&, RenderFormat);

struct MonotoneCheck {
  long long checkedCells = 0;
  long long violations = 0;
};
MonotoneCheck check_column_monotonicity(const ColorGrid&);

}  // namespace egsim
