#include "egsim/coloring.hpp"

#include <algorithm>

namespace egsim {

namespace {

Cell to_cell(Winner w) {
  switch (w) {
    case Winner::Win1: return Cell::White;
    case Winner::Win0: return Cell::Black;
    default: return Cell::Unknown;
  }
}

}  // namespace

ColorGrid compute_coloring(const Oca& a, const Oca& aPrime, int mMax,
                           int mPrimeMax, const Bounds& solverBounds,
                           bool useMonotoneFill) {
  require_valid(validate(a), "oca");
  require_valid(validate(aPrime), "ocn");
  if (!aPrime.zeroRules.empty())
    throw InvalidModel("coloring requires a net on the Duplicator side");

  ColorGrid grid;
  grid.statesLeft = a.states.declared_count();
  grid.statesRight = aPrime.states.declared_count();
  grid.mMax = mMax;
  grid.mPrimeMax = mPrimeMax;
  grid.boundsUsed = solverBounds;
  grid.leftNames.assign(a.states.names().begin(),
                        a.states.names().begin() + grid.statesLeft);
  grid.rightNames.assign(aPrime.states.names().begin(),
                         aPrime.states.names().begin() + grid.statesRight);
  grid.cells.assign(static_cast<size_t>(grid.planes()) * (mMax + 1) * (mPrimeMax + 1),
                    Cell::Unknown);

  SimAnalysis analysis(&a, &aPrime, solverBounds);
  std::vector<SimPair> inits;
  inits.reserve(grid.cells.size());
  for (int p = 0; p < grid.statesLeft; ++p)
    for (int q = 0; q < grid.statesRight; ++q)
      for (int m = 0; m <= mMax; ++m)
        for (int mp = 0; mp <= mPrimeMax; ++mp)
          inits.push_back({OcaConf{p, m}, OcaConf{q, mp}});
  analysis.prepare(inits);

  auto cell_of = [&](int p, int q, int m, int mp) {
    return to_cell(analysis.classify({OcaConf{p, m}, OcaConf{q, mp}}));
  };

  for (int p = 0; p < grid.statesLeft; ++p)
    for (int q = 0; q < grid.statesRight; ++q)
      for (int m = 0; m <= mMax; ++m) {
        if (useMonotoneFill) {
          // Monotonicity in the Duplicator counter: a definite Black at the
          // top of the line blackens it entirely, a definite White fills
          // everything to its right.
          Cell top = cell_of(p, q, m, mPrimeMax);
          if (top == Cell::Black) {
            for (int mp = 0; mp <= mPrimeMax; ++mp)
              grid.cells[grid.idx(p, q, m, mp)] = Cell::Black;
            continue;
          }
          grid.cells[grid.idx(p, q, m, mPrimeMax)] = top;
          for (int mp = 0; mp < mPrimeMax; ++mp) {
            Cell c = cell_of(p, q, m, mp);
            grid.cells[grid.idx(p, q, m, mp)] = c;
            if (c == Cell::White) {
              for (int rest = mp + 1; rest <= mPrimeMax; ++rest)
                grid.cells[grid.idx(p, q, m, rest)] = Cell::White;
              break;
            }
          }
        } else {
          for (int mp = 0; mp <= mPrimeMax; ++mp)
            grid.cells[grid.idx(p, q, m, mp)] = cell_of(p, q, m, mp);
        }
      }
  return grid;
}

std::vector<LineSummary> line_summaries(const ColorGrid& g) {
  std::vector<LineSummary> out(static_cast<size_t>(g.planes()) * (g.mMax + 1));
  for (int plane = 0; plane < g.planes(); ++plane) {
    int p = plane / g.statesRight, q = plane % g.statesRight;
    for (int i = 0; i <= g.mMax; ++i) {
      LineSummary& s = out[static_cast<size_t>(plane) * (g.mMax + 1) + i];
      bool allBlack = true;
      for (int mp = 0; mp <= g.mPrimeMax; ++mp)
        allBlack &= g.at(p, q, i, mp) == Cell::Black;
      if (allBlack) {
        s.status = LineSummary::BlackWithinGrid;
        continue;
      }
      // Least w with a definite all-White tail and a definite Black boundary.
      int w = g.mPrimeMax + 1;
      while (w > 0 && g.at(p, q, i, w - 1) == Cell::White) --w;
      bool ok = w <= g.mPrimeMax && (w == 0 || g.at(p, q, i, w - 1) == Cell::Black);
      if (ok) {
        s.status = LineSummary::WhiteFrom;
        s.w = w;
      } else {
        s.status = LineSummary::Inconclusive;
      }
    }
  }
  return out;
}

std::optional<OcaToOcnParams> detect_periodic_parameters(const ColorGrid& g) {
  auto lines = line_summaries(g);
  auto line = [&](int plane, int i) -> const LineSummary& {
    return lines[static_cast<size_t>(plane) * (g.mMax + 1) + i];
  };
  for (int l = 1; l <= g.mMax / 2; ++l)
    for (int K = 1; K <= g.mMax / 3; ++K) {
      if (l + K - 1 > g.mMax) continue;
      bool ok = true;
      // The extraction window l..l+K-1 must be conclusive for every pair.
      for (int plane = 0; plane < g.planes() && ok; ++plane)
        for (int r = 0; r < K && ok; ++r)
          ok = line(plane, l + r).status != LineSummary::Inconclusive;
      // Pattern condition over the whole definite region.
      for (int plane = 0; plane < g.planes() && ok; ++plane)
        for (int i = l; i + K <= g.mMax && ok; ++i) {
          const LineSummary& x = line(plane, i);
          const LineSummary& y = line(plane, i + K);
          if (x.status == LineSummary::Inconclusive ||
              y.status == LineSummary::Inconclusive)
            continue;
          bool xb = x.status == LineSummary::BlackWithinGrid;
          bool yb = y.status == LineSummary::BlackWithinGrid;
          if (xb != yb)
            ok = false;
          else if (!xb && x.w > y.w)
            ok = false;
        }
      if (!ok) continue;
      OcaToOcnParams params;
      params.l = l;
      params.K = K;
      params.statesLeft = g.statesLeft;
      params.statesRight = g.statesRight;
      params.wAtL.resize(static_cast<size_t>(g.planes()));
      params.blackLine.resize(static_cast<size_t>(g.planes()) * K);
      for (int plane = 0; plane < g.planes(); ++plane) {
        const LineSummary& s = line(plane, l);
        params.wAtL[plane] =
            s.status == LineSummary::BlackWithinGrid ? kInfiniteW : s.w;
        for (int r = 0; r < K; ++r)
          params.blackLine[static_cast<size_t>(plane) * K + r] =
              line(plane, l + r).status == LineSummary::BlackWithinGrid ? 1 : 0;
      }
      return params;
    }
  return std::nullopt;
}

std::string render_grid(const ColorGrid& g, RenderFormat fmt) {
  std::string out;
  if (fmt == RenderFormat::Ascii) {
    for (int plane = 0; plane < g.planes(); ++plane) {
      int p = plane / g.statesRight, q = plane % g.statesRight;
      if (g.planes() > 1)
        out += "# " + g.leftNames[p] + "|" + g.rightNames[q] + "\n";
      for (int m = 0; m <= g.mMax; ++m) {
        for (int mp = 0; mp <= g.mPrimeMax; ++mp)
          out += cell_char(g.at(p, q, m, mp));
        out += '\n';
      }
    }
    return out;
  }
  int width = g.mPrimeMax + 1;
  int height = g.planes() * (g.mMax + 1);
  out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (int plane = 0; plane < g.planes(); ++plane) {
    int p = plane / g.statesRight, q = plane % g.statesRight;
    for (int m = 0; m <= g.mMax; ++m)
      for (int mp = 0; mp <= g.mPrimeMax; ++mp) {
        Cell c = g.at(p, q, m, mp);
        out += static_cast<char>(c == Cell::White ? 255 : c == Cell::Black ? 0 : 128);
      }
  }
  return out;
}

MonotoneCheck check_column_monotonicity(const ColorGrid& g) {
  MonotoneCheck res;
  for (int plane = 0; plane < g.planes(); ++plane) {
    int p = plane / g.statesRight, q = plane % g.statesRight;
    for (int m = 0; m <= g.mMax; ++m)
      for (int mp = 0; mp < g.mPrimeMax; ++mp) {
        Cell c = g.at(p, q, m, mp), up = g.at(p, q, m, mp + 1);
        ++res.checkedCells;
        if (c == Cell::White && up == Cell::Black) ++res.violations;
      }
  }
  return res;
}

}  // namespace egsim
