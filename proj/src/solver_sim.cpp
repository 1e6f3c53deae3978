#include <algorithm>
#include <climits>
#include <deque>
#include <unordered_map>

#include "egsim/solvers.hpp"

namespace egsim {

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 0x7fffffff)) * 0x100000001b3ull;
    return h;
  }
};

class VecPool {
 public:
  int intern(const std::vector<int>& v) {
    auto it = index_.find(v);
    if (it != index_.end()) return it->second;
    items_.push_back(v);
    int id = static_cast<int>(items_.size()) - 1;
    index_.emplace(items_.back(), id);
    return id;
  }
  const std::vector<int>& get(int id) const { return items_[id]; }

 private:
  std::vector<std::vector<int>> items_;
  std::unordered_map<std::vector<int>, int, VecHash> index_;
};

// One side of the simulation game: a machine view plus its interned
// configuration space.
struct SideView {
  enum Kind : uint8_t { KPda, KOca, KVass } kind = KOca;
  const Pda* pda = nullptr;
  const Oca* oca = nullptr;
  const Vass* vass = nullptr;
  bool netLike = false;  // upward monotone, no zero tests (OCN / VASS)
  int counterCap = 1;

  VecPool pool;  // stack words / vass vectors
  std::vector<std::pair<int, int>> confs;  // (state, counter-or-pool-id)
  std::unordered_map<uint64_t, int> index;
  std::vector<int> actionMap;  // side action id -> shared id

  void init(LtsRef m, NameTable& shared, int cap) {
    counterCap = cap;
    if (std::holds_alternative<const Pda*>(m)) {
      kind = KPda;
      pda = std::get<const Pda*>(m);
      require_valid(validate(*pda), "pda");
      for (const auto& a : pda->actions.names())
        actionMap.push_back(shared.declare(a));
    } else if (std::holds_alternative<const Oca*>(m)) {
      kind = KOca;
      oca = std::get<const Oca*>(m);
      require_valid(validate(*oca), "oca");
      netLike = oca->zeroRules.empty();
      for (const auto& a : oca->actions.names())
        actionMap.push_back(shared.declare(a));
    } else {
      kind = KVass;
      vass = std::get<const Vass*>(m);
      require_valid(validate(*vass), "vass");
      netLike = true;
      for (const auto& a : vass->actions.names())
        actionMap.push_back(shared.declare(a));
    }
  }

  int intern(int state, int aux) {
    uint64_t key = (static_cast<uint64_t>(state) << 32) | static_cast<uint32_t>(aux);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(confs.size());
    confs.push_back({state, aux});
    index.emplace(key, id);
    return id;
  }

  int intern_conf(const LtsConf& c) {
    switch (kind) {
      case KPda: {
        const auto& pc = std::get<PdaConf>(c);
        return intern(pc.state, pool.intern(pc.stack));
      }
      case KOca: {
        const auto& oc = std::get<OcaConf>(c);
        return intern(oc.state, oc.counter);
      }
      default: {
        const auto& vc = std::get<VassConf>(c);
        return intern(vc.state, pool.intern(vc.counters));
      }
    }
  }

  bool conf_matches(const LtsConf& c) const {
    switch (kind) {
      case KPda: return std::holds_alternative<PdaConf>(c);
      case KOca: return std::holds_alternative<OcaConf>(c);
      default: return std::holds_alternative<VassConf>(c);
    }
  }

  bool over_cap(const LtsConf& c) const {
    switch (kind) {
      case KPda:
        return static_cast<int>(std::get<PdaConf>(c).stack.size()) > counterCap;
      case KOca: return std::get<OcaConf>(c).counter > counterCap;
      default: {
        for (int x : std::get<VassConf>(c).counters)
          if (x > counterCap) return true;
        return false;
      }
    }
  }

  // Clamp counters to the cap; only meaningful for net-like systems.
  LtsConf clamp(const LtsConf& c, bool* changed) const {
    *changed = false;
    if (kind == KOca) {
      OcaConf oc = std::get<OcaConf>(c);
      if (oc.counter > counterCap) {
        oc.counter = counterCap;
        *changed = true;
      }
      return oc;
    }
    VassConf vc = std::get<VassConf>(c);
    for (int& x : vc.counters)
      if (x > counterCap) {
        x = counterCap;
        *changed = true;
      }
    return vc;
  }

  LtsConf materialize(int id) const {
    auto [state, aux] = confs[id];
    switch (kind) {
      case KPda: return PdaConf{state, pool.get(aux)};
      case KOca: return OcaConf{state, aux};
      default: return VassConf{state, pool.get(aux)};
    }
  }

  struct RawStep {
    int action;  // shared id
    int trans;
    LtsConf to;
  };

  std::vector<RawStep> expand(int id) const {
    std::vector<RawStep> out;
    LtsConf c = materialize(id);
    switch (kind) {
      case KPda:
        for (auto& s : steps(*pda, std::get<PdaConf>(c)))
          out.push_back({actionMap[s.action], s.transition, std::move(s.to)});
        break;
      case KOca:
        for (auto& s : steps(*oca, std::get<OcaConf>(c)))
          out.push_back({actionMap[s.action], s.transition, std::move(s.to)});
        break;
      default:
        for (auto& s : steps(*vass, std::get<VassConf>(c)))
          out.push_back({actionMap[s.action], s.transition, std::move(s.to)});
    }
    return out;
  }

  std::string fmt(int id) const {
    LtsConf c = materialize(id);
    switch (kind) {
      case KPda: return format_conf(*pda, std::get<PdaConf>(c));
      case KOca: return format_conf(*oca, std::get<OcaConf>(c));
      default: return format_conf(*vass, std::get<VassConf>(c));
    }
  }
};

constexpr uint8_t kSpoilerOverflow = 1;
constexpr uint8_t kHasReplies = 2;
constexpr uint8_t kClamped = 1;
constexpr int kInfRank = INT_MAX;

}  // namespace

struct SimAnalysis::Impl {
  SideView left, right;
  Bounds bounds;
  long long budget;
  NameTable sharedActions;

  std::unordered_map<uint64_t, int> pairIndex;
  std::vector<int> pairLeft, pairRight;
  std::vector<uint8_t> pairPinned;  // unknown leaf (init beyond caps)

  struct Ob {
    int pair;
    int spoilerTrans;
    int action;
    int spoilerTarget;  // left conf id, -1 if beyond cap
    uint8_t flags;
    int repBegin, repEnd;
  };
  struct Reply {
    int target;  // pair id
    int dupTrans;
    uint8_t flags;
  };
  std::vector<Ob> obs;
  std::vector<Reply> replies;
  std::vector<int> obBegin, obEnd;  // per expanded pair

  bool fresh = false;
  std::vector<int> frank;
  std::vector<char> isTrue;
  std::vector<int> revStart, revReply;  // pair -> incoming reply indices
  std::vector<int> replyOwner;          // reply index -> obligation index

  Impl(LtsRef l, LtsRef r, Bounds b, long long bud) : bounds(b), budget(bud) {
    if (bounds.counterCap < 1 || bounds.energyCap < 1 || bounds.roundCap < 1)
      throw Error("bounds must be >= 1");
    if (budget <= 0) budget = default_position_budget();
    left.init(l, sharedActions, bounds.counterCap);
    right.init(r, sharedActions, bounds.counterCap);
  }

  int intern_pair(int l, int r, bool pinned) {
    uint64_t key = (static_cast<uint64_t>(l) << 32) | static_cast<uint32_t>(r);
    auto it = pairIndex.find(key);
    if (it != pairIndex.end()) return it->second;
    int id = static_cast<int>(pairLeft.size());
    if (id >= budget) throw CapacityExceeded("pair budget exceeded");
    pairLeft.push_back(l);
    pairRight.push_back(r);
    pairPinned.push_back(pinned ? 1 : 0);
    pairIndex.emplace(key, id);
    return id;
  }

  void expand_all() {
    while (obBegin.size() < pairLeft.size()) {
      int p = static_cast<int>(obBegin.size());
      obBegin.push_back(static_cast<int>(obs.size()));
      if (!pairPinned[p]) {
        auto leftSteps = left.expand(pairLeft[p]);
        auto rightSteps = right.expand(pairRight[p]);
        for (const auto& ls : leftSteps) {
          Ob ob{};
          ob.pair = p;
          ob.spoilerTrans = ls.trans;
          ob.action = ls.action;
          ob.flags = 0;
          ob.repBegin = static_cast<int>(replies.size());
          bool overflow = left.over_cap(ls.to);
          int ltarget = overflow ? -1 : left.intern_conf(ls.to);
          ob.spoilerTarget = ltarget;
          if (overflow) ob.flags |= kSpoilerOverflow;
          for (const auto& rs : rightSteps) {
            if (rs.action != ls.action) continue;
            if (overflow) {
              ob.flags |= kHasReplies;
              continue;  // unknown leaf; reply pairs not materialized
            }
            if (right.over_cap(rs.to)) {
              if (right.netLike) {
                bool ch = false;
                LtsConf cc = right.clamp(rs.to, &ch);
                int t = intern_pair(ltarget, right.intern_conf(cc), false);
                replies.push_back({t, rs.trans, kClamped});
              } else {
                replies.push_back({-1, rs.trans, 0});  // unknown leaf
              }
            } else {
              int t = intern_pair(ltarget, right.intern_conf(rs.to), false);
              replies.push_back({t, rs.trans, 0});
            }
          }
          ob.repEnd = static_cast<int>(replies.size());
          if (ob.repEnd > ob.repBegin) ob.flags |= kHasReplies;
          obs.push_back(ob);
        }
      }
      obEnd.push_back(static_cast<int>(obs.size()));
      fresh = false;
    }
  }

  void build_reverse() {
    int n = static_cast<int>(pairLeft.size());
    replyOwner.assign(replies.size(), -1);
    for (size_t o = 0; o < obs.size(); ++o)
      for (int i = obs[o].repBegin; i < obs[o].repEnd; ++i)
        replyOwner[i] = static_cast<int>(o);
    revStart.assign(n + 1, 0);
    for (const auto& r : replies)
      if (r.target >= 0) ++revStart[r.target + 1];
    for (int i = 0; i < n; ++i) revStart[i + 1] += revStart[i];
    revReply.assign(revStart[n], 0);
    std::vector<int> fill(revStart.begin(), revStart.end() - 1);
    for (size_t i = 0; i < replies.size(); ++i)
      if (replies[i].target >= 0)
        revReply[fill[replies[i].target]++] = static_cast<int>(i);
  }

  // False-rank: the least k with the pair refuted by the k-round approximant,
  // counting only certificates that avoid unknown leaves (exact semantics:
  // any cap overflow pins the successor pair at Unknown).
  void compute_frank() {
    int n = static_cast<int>(pairLeft.size());
    frank.assign(n, kInfRank);
    std::vector<int> pending(obs.size(), 0);
    std::vector<char> dead(obs.size(), 0);
    std::vector<std::vector<int>> buckets(2);
    for (size_t o = 0; o < obs.size(); ++o) {
      const Ob& ob = obs[o];
      if (!(ob.flags & kHasReplies)) {
        if (frank[ob.pair] == kInfRank) {
          frank[ob.pair] = 1;
          buckets[1].push_back(ob.pair);
        }
        continue;
      }
      if (ob.flags & kSpoilerOverflow) {
        dead[o] = 1;
        continue;
      }
      for (int i = ob.repBegin; i < ob.repEnd; ++i)
        if (replies[i].target < 0 || (replies[i].flags & kClamped)) dead[o] = 1;
      pending[o] = ob.repEnd - ob.repBegin;
    }
    for (size_t level = 1; level < buckets.size(); ++level) {
      for (size_t bi = 0; bi < buckets[level].size(); ++bi) {
        int p = buckets[level][bi];
        for (int ri = revStart[p]; ri < revStart[p + 1]; ++ri) {
          int o = replyOwner[revReply[ri]];
          if (dead[o]) continue;
          if (--pending[o] == 0) {
            int q = obs[o].pair;
            if (frank[q] == kInfRank) {
              frank[q] = static_cast<int>(level) + 1;
              if (buckets.size() <= level + 1) buckets.resize(level + 2);
              buckets[level + 1].push_back(q);
            }
          }
        }
      }
    }
  }

  // Greatest fixpoint of the one-round simulation condition; Duplicator-side
  // counters were saturated at the cap during expansion (net-like systems),
  // which only weakens Duplicator, so membership certifies Win1.
  void compute_gfp() {
    int n = static_cast<int>(pairLeft.size());
    isTrue.assign(n, 1);
    std::vector<int> trueCount(obs.size(), 0);
    std::deque<int> removal;
    for (int p = 0; p < n; ++p)
      if (pairPinned[p]) isTrue[p] = 0;
    for (size_t o = 0; o < obs.size(); ++o) {
      const Ob& ob = obs[o];
      int cnt = 0;
      if (!(ob.flags & kSpoilerOverflow))
        for (int i = ob.repBegin; i < ob.repEnd; ++i)
          if (replies[i].target >= 0) ++cnt;
      trueCount[o] = cnt;
      if (cnt == 0 && isTrue[ob.pair]) {
        isTrue[ob.pair] = 0;
        removal.push_back(ob.pair);
      }
    }
    while (!removal.empty()) {
      int p = removal.front();
      removal.pop_front();
      for (int ri = revStart[p]; ri < revStart[p + 1]; ++ri) {
        int o = replyOwner[revReply[ri]];
        int q = obs[o].pair;
        if (!isTrue[q]) continue;
        if (--trueCount[o] == 0) {
          isTrue[q] = 0;
          removal.push_back(q);
        }
      }
    }
  }

  void refresh() {
    expand_all();
    if (fresh) return;
    build_reverse();
    compute_frank();
    compute_gfp();
    fresh = true;
  }

  std::string fmt_pair(int p) const {
    return left.fmt(pairLeft[p]) + " vs " + right.fmt(pairRight[p]);
  }

  std::string fmt_defense(const Ob& ob) const {
    return left.fmt(ob.spoilerTarget) + " vs " + right.fmt(pairRight[ob.pair]) +
           " after " + sharedActions.name(ob.action);
  }

  // The obligation through which the pair's false-rank is realized.
  int chosen_obligation(int p) const {
    int best = -1, bestRank = kInfRank;
    for (int o = obBegin[p]; o < obEnd[p]; ++o) {
      const Ob& ob = obs[o];
      int cand;
      if (!(ob.flags & kHasReplies)) {
        cand = 1;
      } else if (ob.flags & kSpoilerOverflow) {
        continue;
      } else {
        cand = 0;
        for (int i = ob.repBegin; i < ob.repEnd; ++i) {
          const Reply& r = replies[i];
          if (r.target < 0 || (r.flags & kClamped) || frank[r.target] == kInfRank) {
            cand = kInfRank;
            break;
          }
          cand = std::max(cand, frank[r.target]);
        }
        if (cand == kInfRank) continue;
        cand += 1;
      }
      if (cand < bestRank) {
        bestRank = cand;
        best = o;
      }
    }
    return best;
  }

  std::vector<StrategyEntry> spoiler_strategy(int init) {
    std::vector<StrategyEntry> out;
    std::vector<char> seen(pairLeft.size(), 0);
    std::deque<int> queue{init};
    seen[init] = 1;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      int o = chosen_obligation(p);
      if (o < 0) continue;
      const Ob& ob = obs[o];
      out.push_back({fmt_pair(p), ob.spoilerTrans,
                     ob.spoilerTarget >= 0 ? fmt_defense(ob) : "duplicator-stuck"});
      for (int i = ob.repBegin; i < ob.repEnd; ++i) {
        int t = replies[i].target;
        if (t >= 0 && !seen[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.position < b.position; });
    return out;
  }

  std::vector<StrategyEntry> duplicator_strategy(int init) {
    std::vector<StrategyEntry> out;
    std::vector<char> seen(pairLeft.size(), 0);
    std::deque<int> queue{init};
    seen[init] = 1;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      for (int o = obBegin[p]; o < obEnd[p]; ++o) {
        const Ob& ob = obs[o];
        int best = -1;
        for (int i = ob.repBegin; i < ob.repEnd; ++i) {
          const Reply& r = replies[i];
          if (r.target < 0 || !isTrue[r.target]) continue;
          if (best == -1 || r.dupTrans < replies[best].dupTrans) best = i;
        }
        if (best < 0) continue;  // cannot happen on a True pair
        int t = replies[best].target;
        out.push_back({fmt_defense(ob), replies[best].dupTrans, fmt_pair(t)});
        if (!seen[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.position < b.position; });
    return out;
  }

  int intern_init(const SimPair& pr, bool* rightClamped) {
    if (!left.conf_matches(pr.left) || !right.conf_matches(pr.right))
      throw KindMismatch("pair kinds do not match the systems");
    *rightClamped = false;
    if (left.over_cap(pr.left)) {
      // The whole pair is an unknown leaf.
      int l = left.intern_conf(pr.left);
      int r = right.intern_conf(pr.right);
      return intern_pair(l, r, true);
    }
    LtsConf rc = pr.right;
    if (right.over_cap(rc)) {
      if (!right.netLike) {
        int l = left.intern_conf(pr.left);
        int r = right.intern_conf(rc);
        return intern_pair(l, r, true);
      }
      bool ch = false;
      rc = right.clamp(rc, &ch);
      *rightClamped = ch;
    }
    return intern_pair(left.intern_conf(pr.left), right.intern_conf(rc), false);
  }

  Winner classify(int p, bool rightClamped) const {
    if (pairPinned[p]) return Winner::Unknown;
    if (!rightClamped && frank[p] <= bounds.roundCap) return Winner::Win0;
    if (isTrue[p]) return Winner::Win1;
    return Winner::Unknown;
  }

  Verdict solve(const SimPair& pr, bool wantStrategy) {
    bool rightClamped = false;
    int p = intern_init(pr, &rightClamped);
    refresh();
    Verdict v;
    v.boundsUsed = bounds;
    v.positionsExplored = static_cast<long long>(pairLeft.size());
    v.winner = classify(p, rightClamped);
    if (wantStrategy) {
      if (v.winner == Winner::Win0)
        v.strategy = spoiler_strategy(p);
      else if (v.winner == Winner::Win1)
        v.strategy = duplicator_strategy(p);
    }
    return v;
  }
};

SimAnalysis::SimAnalysis(LtsRef l, LtsRef r, Bounds b, long long budget)
    : impl_(std::make_unique<Impl>(l, r, b, budget)) {}
SimAnalysis::~SimAnalysis() = default;
SimAnalysis::SimAnalysis(SimAnalysis&&) noexcept = default;

Verdict SimAnalysis::solve(const SimPair& pr) { return impl_->solve(pr, true); }

void SimAnalysis::prepare(const std::vector<SimPair>& pairs) {
  bool clamped = false;
  for (const auto& pr : pairs) impl_->intern_init(pr, &clamped);
  impl_->refresh();
}

Winner SimAnalysis::classify(const SimPair& pr) {
  return impl_->solve(pr, false).winner;
}

long long SimAnalysis::positions_explored() const {
  return static_cast<long long>(impl_->pairLeft.size());
}

Verdict solve_simulation_bounded(LtsRef l, LtsRef r, const SimPair& pr,
                                 const Bounds& b, long long budget) {
  SimAnalysis a(l, r, b, budget);
  return a.solve(pr);
}

Verdict refine(const Verdict& previous, LtsRef l, LtsRef r, const SimPair& pr,
               const Bounds& larger) {
  if (!larger.dominates(previous.boundsUsed))
    throw BoundsNotLarger("refine bounds must dominate the previous bounds");
  return solve_simulation_bounded(l, r, pr, larger);
}

}  // namespace egsim
