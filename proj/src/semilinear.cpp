#include "egsim/semilinear.hpp"

#include <algorithm>
#include <chrono>

namespace egsim {

Cell upc_color(const Upc& u, int p, int q, long long m, long long mPrime) {
  if (!u.is_declared(p, q))
    throw UnknownPair("pair (" + std::to_string(p) + "," + std::to_string(q) +
                      ") not declared in the candidate");
  const auto& win = u.windows[p * u.statesRight + q];
  int fm = u.fold_m(m), fmp = u.fold_mp(mPrime);
  return win[static_cast<size_t>(fm) * (u.thresholdMPrime + 1) + fmp]
             ? Cell::White
             : Cell::Black;
}

std::vector<Violation> validate_upc(const Upc& u) {
  std::vector<Violation> out;
  if (u.periodM < 1 || u.periodMPrime < 1) out.push_back({"BadPeriod", ""});
  if (u.periodM > u.thresholdM + 1 || u.periodMPrime > u.thresholdMPrime + 1)
    out.push_back({"PeriodExceedsWindow", ""});
  if (static_cast<int>(u.declared.size()) != u.statesLeft * u.statesRight ||
      u.windows.size() != u.declared.size()) {
    out.push_back({"BadShape", ""});
    return out;
  }
  size_t cellCount =
      static_cast<size_t>(u.thresholdM + 1) * (u.thresholdMPrime + 1);
  for (size_t i = 0; i < u.windows.size(); ++i) {
    if (!u.declared[i]) continue;
    if (u.windows[i].size() != cellCount) {
      out.push_back({"BadShape", "pair " + std::to_string(i)});
      continue;
    }
    const auto& win = u.windows[i];
    auto at = [&](int m, int mp) {
      return win[static_cast<size_t>(m) * (u.thresholdMPrime + 1) + mp] != 0;
    };
    for (int m = 0; m <= u.thresholdM && out.empty(); ++m) {
      for (int mp = 0; mp < u.thresholdMPrime; ++mp)
        if (at(m, mp) && !at(m, mp + 1)) {
          out.push_back({"ColumnNotMonotone",
                         "pair " + std::to_string(i) + " at (" +
                             std::to_string(m) + "," + std::to_string(mp) + ")"});
          break;
        }
      // Vertical seam: White at the top row must survive the fold.
      if (out.empty() && u.periodMPrime <= u.thresholdMPrime + 1) {
        int wrap = u.thresholdMPrime - u.periodMPrime + 1;
        if (wrap >= 0 && at(m, u.thresholdMPrime) && !at(m, wrap))
          out.push_back({"SeamContradiction",
                         "pair " + std::to_string(i) + " column " +
                             std::to_string(m)});
      }
    }
  }
  return out;
}

namespace {

void require_upc_matches(const Upc& u, const Oca& a, const Oca& aPrime) {
  if (u.statesLeft != a.states.declared_count() ||
      u.statesRight != aPrime.states.declared_count())
    throw InvalidUpc("candidate state counts do not match the machines");
  auto vs = validate_upc(u);
  if (!vs.empty()) throw InvalidUpc("invalid candidate: " + vs[0].code);
}

}  // namespace

CheckResult check_simulation_candidate(const Oca& a, const Oca& aPrime,
                                       const Upc& u,
                                       const std::vector<MustPoint>& mustContain) {
  require_valid(validate(a), "oca");
  require_valid(validate(aPrime), "ocn");
  if (!aPrime.zeroRules.empty())
    throw InvalidModel("candidate checking requires a net on the right");
  require_upc_matches(u, a, aPrime);
  for (int p = 0; p < u.statesLeft; ++p)
    for (int q = 0; q < u.statesRight; ++q)
      if (!u.is_declared(p, q))
        throw UnknownPair("pair " + a.states.name(p) + "," +
                          aPrime.states.name(q) + " missing from the candidate");

  CheckResult res;
  for (const auto& pt : mustContain) {
    if (upc_color(u, pt.p, pt.q, pt.m, pt.mPrime) != Cell::White) {
      res.accepted = false;
      res.reason = "RequiredPairNotIncluded";
      res.p = pt.p;
      res.q = pt.q;
      res.m = pt.m;
      res.mPrime = pt.mPrime;
      return res;
    }
  }

  // Action correspondence by name.
  std::vector<int> actMap(a.actions.declared_count(), -1);
  for (int i = 0; i < a.actions.declared_count(); ++i)
    if (auto id = aPrime.actions.find(a.actions.name(i));
        id && *id < aPrime.actions.declared_count())
      actMap[i] = *id;

  int mHi = u.thresholdM + 2 * u.periodM;
  int mpHi = u.thresholdMPrime + 2 * u.periodMPrime;
  for (int p = 0; p < u.statesLeft; ++p)
    for (int q = 0; q < u.statesRight; ++q)
      for (int m = 0; m <= mHi; ++m)
        for (int mp = 0; mp <= mpHi; ++mp) {
          if (upc_color(u, p, q, m, mp) != Cell::White) continue;
          for (const auto& st : steps(a, OcaConf{p, m})) {
            bool matched = false;
            if (actMap[st.action] >= 0)
              for (const auto& rp : steps(aPrime, OcaConf{q, mp})) {
                if (rp.action != actMap[st.action]) continue;
                if (upc_color(u, st.to.state, rp.to.state, st.to.counter,
                              rp.to.counter) == Cell::White) {
                  matched = true;
                  break;
                }
              }
            if (!matched) {
              res.accepted = false;
              res.reason = "UnmatchedStep";
              res.p = p;
              res.q = q;
              res.m = m;
              res.mPrime = mp;
              res.spoilerTransition = st.transition;
              return res;
            }
          }
        }
  return res;
}

std::optional<Upc> coloring_to_upc(const ColorGrid& g,
                                   const OcaToOcnParams& params) {
  int M = params.l + 2 * params.K;
  if (M > g.mMax) return std::nullopt;
  auto lines = line_summaries(g);
  long long maxW = 0;
  for (int plane = 0; plane < g.planes(); ++plane)
    for (int i = 0; i <= M; ++i) {
      const LineSummary& s = lines[static_cast<size_t>(plane) * (g.mMax + 1) + i];
      if (s.status == LineSummary::Inconclusive) return std::nullopt;
      if (s.status == LineSummary::WhiteFrom) maxW = std::max<long long>(maxW, s.w);
    }
  int MPrime = static_cast<int>(maxW) + 2;
  if (MPrime > g.mPrimeMax) return std::nullopt;

  Upc u;
  u.thresholdM = M;
  u.periodM = params.K;
  u.thresholdMPrime = MPrime;
  u.periodMPrime = 1;
  u.statesLeft = g.statesLeft;
  u.statesRight = g.statesRight;
  u.leftNames = g.leftNames;
  u.rightNames = g.rightNames;
  u.declared.assign(static_cast<size_t>(g.planes()), 1);
  u.windows.resize(g.planes());
  for (int p = 0; p < g.statesLeft; ++p)
    for (int q = 0; q < g.statesRight; ++q) {
      auto& win = u.windows[p * g.statesRight + q];
      win.assign(static_cast<size_t>(M + 1) * (MPrime + 1), 0);
      for (int m = 0; m <= M; ++m)
        for (int mp = 0; mp <= MPrime; ++mp) {
          Cell c = g.at(p, q, m, mp);
          if (c == Cell::Unknown) return std::nullopt;
          win[static_cast<size_t>(m) * (MPrime + 1) + mp] = c == Cell::White;
        }
    }
  if (!validate_upc(u).empty()) return std::nullopt;
  return u;
}

namespace {

// Enumeration of small candidates: per pair, each window column is either
// all-Black or White from some row w (column monotone, vertical period 1).
struct CandidateEnumerator {
  int statesLeft, statesRight;
  std::vector<std::string> leftNames, rightNames;
  int maxWindow, maxPeriod;

  struct Shape {
    int M, MPrime, P;
    long long size;
  };
  std::vector<Shape> shapes;
  size_t shapeIdx = 0;
  std::vector<int> odometer;  // one white-from value per plane column
  bool shapeFresh = true;

  CandidateEnumerator(const Oca& a, const Oca& aPrime, int maxW, int maxP)
      : statesLeft(a.states.declared_count()),
        statesRight(aPrime.states.declared_count()),
        maxWindow(maxW),
        maxPeriod(maxP) {
    leftNames.assign(a.states.names().begin(),
                     a.states.names().begin() + statesLeft);
    rightNames.assign(aPrime.states.names().begin(),
                      aPrime.states.names().begin() + statesRight);
    for (int M = 0; M <= maxWindow; ++M)
      for (int MPrime = 0; MPrime <= maxWindow; ++MPrime)
        for (int P = 1; P <= std::min(maxPeriod, M + 1); ++P)
          shapes.push_back({M, MPrime, P,
                            static_cast<long long>(statesLeft) * statesRight *
                                    (M + 1) * (MPrime + 1) +
                                P});
    std::stable_sort(shapes.begin(), shapes.end(),
                     [](const Shape& x, const Shape& y) { return x.size < y.size; });
  }

  std::optional<Upc> next() {
    while (shapeIdx < shapes.size()) {
      const Shape& s = shapes[shapeIdx];
      int columns = statesLeft * statesRight * (s.M + 1);
      int valueCount = s.MPrime + 2;  // white-from 0..MPrime, or all-Black
      if (shapeFresh) {
        odometer.assign(columns, 0);
        shapeFresh = false;
      } else {
        int i = 0;
        while (i < columns && ++odometer[i] == valueCount) {
          odometer[i] = 0;
          ++i;
        }
        if (i == columns) {
          ++shapeIdx;
          shapeFresh = true;
          continue;
        }
      }
      Upc u;
      u.thresholdM = s.M;
      u.periodM = s.P;
      u.thresholdMPrime = s.MPrime;
      u.periodMPrime = 1;
      u.statesLeft = statesLeft;
      u.statesRight = statesRight;
      u.leftNames = leftNames;
      u.rightNames = rightNames;
      u.declared.assign(static_cast<size_t>(statesLeft) * statesRight, 1);
      u.windows.resize(u.declared.size());
      for (size_t plane = 0; plane < u.windows.size(); ++plane) {
        auto& win = u.windows[plane];
        win.assign(static_cast<size_t>(s.M + 1) * (s.MPrime + 1), 0);
        for (int m = 0; m <= s.M; ++m) {
          int w = odometer[plane * (s.M + 1) + m];
          if (w > s.MPrime) continue;  // all-Black column
          for (int mp = w; mp <= s.MPrime; ++mp)
            win[static_cast<size_t>(m) * (s.MPrime + 1) + mp] = 1;
        }
      }
      return u;
    }
    return std::nullopt;
  }
};

}  // namespace

DecideResult enumerate_and_decide(const Oca& a, const Oca& aPrime,
                                  const OcaConf& left, const OcaConf& right,
                                  const DecideBudget& budget) {
  require_valid(validate(a), "oca");
  require_valid(validate(aPrime), "ocn");
  if (!aPrime.zeroRules.empty())
    throw InvalidModel("decide requires a net on the right");
  auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
               .count() > budget.wallClockSeconds;
  };

  DecideResult res;
  CandidateEnumerator enumerator(a, aPrime, budget.maxWindow, budget.maxPeriod);
  std::vector<MustPoint> must{{left.state, left.counter, right.state, right.counter}};
  long long perRound =
      std::max<long long>(1, budget.maxCandidates / std::max(1, budget.rounds));
  bool enumeratorDone = false;

  for (int round = 1; round <= budget.rounds; ++round) {
    if (out_of_time()) {
      res.note = "budget-exhausted(wallclock)";
      return res;
    }
    // Negative semi-procedure at growing bounds.
    Bounds b = budget.solverBounds;
    b.counterCap = std::max(1, b.counterCap * round / budget.rounds);
    b.roundCap = std::max(1, b.roundCap * round / budget.rounds);
    Verdict v = solve_simulation_bounded(&a, &aPrime, {left, right}, b);
    if (v.winner == Winner::Win0) {
      res.winner = Winner::Win0;
      res.strategy = v.strategy;
      return res;
    }
    // Positive semi-procedure: distilled candidates from growing grids.
    int gm = std::min(6 * round, b.counterCap > 2 ? b.counterCap - 2 : 1);
    Bounds gb = b;
    gb.counterCap = std::max(gb.counterCap, gm + 2);
    ColorGrid grid = compute_coloring(a, aPrime, gm, gm, gb);
    if (auto params = detect_periodic_parameters(grid)) {
      if (auto upc = coloring_to_upc(grid, *params)) {
        ++res.candidatesTried;
        if (check_simulation_candidate(a, aPrime, *upc, must).accepted) {
          res.winner = Winner::Win1;
          res.certificate = std::move(*upc);
          return res;
        }
      }
    }
    // A slice of the systematic enumeration.
    for (long long k = 0; k < perRound && !enumeratorDone; ++k) {
      if ((k & 255) == 0 && out_of_time()) {
        res.note = "budget-exhausted(wallclock)";
        return res;
      }
      auto cand = enumerator.next();
      if (!cand) {
        enumeratorDone = true;
        break;
      }
      ++res.candidatesTried;
      if (check_simulation_candidate(a, aPrime, *cand, must).accepted) {
        res.winner = Winner::Win1;
        res.certificate = std::move(*cand);
        return res;
      }
    }
  }
  res.note = "budget-exhausted";
  return res;
}

}  // namespace egsim
