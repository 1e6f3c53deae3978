#include <algorithm>
#include <cstdlib>
#include <deque>
#include <unordered_map>

#include "egsim/solvers.hpp"

namespace egsim {

long long default_position_budget() {
  if (const char* s = std::getenv("EGSIM_POSITION_BUDGET")) {
    long long v = std::atoll(s);
    if (v > 0) return v;
  }
  return 5000000;
}

const char* to_string(Winner w) {
  switch (w) {
    case Winner::Win0: return "win0";
    case Winner::Win1: return "win1";
    default: return "unknown";
  }
}

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 0x7fffffff)) * 0x100000001b3ull;
    return h;
  }
};

struct TripleKey {
  int a, b, c;
  bool operator==(const TripleKey&) const = default;
};
struct TripleHash {
  size_t operator()(const TripleKey& k) const {
    size_t h = static_cast<size_t>(k.a);
    h = h * 0x100000001b3ull ^ static_cast<size_t>(k.b);
    h = h * 0x100000001b3ull ^ static_cast<size_t>(k.c);
    h ^= h >> 31;
    return h * 0x9e3779b97f4a7c15ull;
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

enum class Cls : uint8_t { Normal, Bankrupt, Frontier };

}  // namespace

struct EnergyAnalysis::Impl {
  const Peg& game;
  Bounds bounds;
  long long budget;

  VecPool words, energies;
  struct Pos {
    int state, word, energy;
  };
  std::vector<Pos> positions;
  std::unordered_map<TripleKey, int, TripleHash> posIndex;
  std::vector<Cls> cls;

  struct Edge {
    int source;
    int target;
    int trans;
    bool clamped;
  };
  std::vector<Edge> edges;
  std::vector<int> edgeStart;  // per expanded position; edgeStart.size() tracks expansion
  std::vector<int> edgeEnd;

  // Reverse adjacency and fixpoint results; rebuilt when the arena grows.
  bool analysisFresh = false;
  std::vector<int> revStart, revEdges;  // target -> incoming edge indices
  std::vector<char> inAttr;
  std::vector<int> attrRank;
  std::vector<char> inSafe;

  Impl(const Peg& g, Bounds b, long long bud) : game(g), bounds(b), budget(bud) {
    if (bounds.counterCap < 1 || bounds.energyCap < 1 || bounds.roundCap < 1)
      throw Error("bounds must be >= 1");
    require_valid(validate(g), "energy game");
    if (budget <= 0) budget = default_position_budget();
  }

  int intern(int state, const std::vector<int>& stack,
             const std::vector<int>& energy) {
    TripleKey key{state, words.intern(stack), energies.intern(energy)};
    auto it = posIndex.find(key);
    if (it != posIndex.end()) return it->second;
    int id = static_cast<int>(positions.size());
    if (id >= budget) throw CapacityExceeded("position budget exceeded");
    positions.push_back({key.a, key.b, key.c});
    posIndex.emplace(key, id);
    bool neg = false;
    for (int e : energy) neg |= e < 0;
    if (neg)
      cls.push_back(Cls::Bankrupt);
    else if (static_cast<int>(stack.size()) > bounds.counterCap)
      cls.push_back(Cls::Frontier);
    else
      cls.push_back(Cls::Normal);
    return id;
  }

  // Forward closure from every interned-but-unexpanded normal position.
  void expand_all() {
    while (edgeStart.size() < positions.size()) {
      int p = static_cast<int>(edgeStart.size());
      edgeStart.push_back(static_cast<int>(edges.size()));
      if (cls[p] == Cls::Normal) {
        PegConf conf{positions[p].state, words.get(positions[p].word),
                     energies.get(positions[p].energy)};
        for (const auto& mv : game_moves(game, conf)) {
          bool clamped = false;
          std::vector<int> e = mv.to.energy;
          bool neg = false;
          for (int x : e) neg |= x < 0;
          if (!neg) {
            for (int& x : e)
              if (x > bounds.energyCap) {
                x = bounds.energyCap;
                clamped = true;
              }
          }
          int t = intern(mv.to.state, mv.to.stack, e);
          edges.push_back({p, t, mv.transition, clamped});
        }
      }
      edgeEnd.push_back(static_cast<int>(edges.size()));
      analysisFresh = false;
    }
  }

  void build_reverse() {
    int n = static_cast<int>(positions.size());
    revStart.assign(n + 1, 0);
    for (const auto& e : edges) ++revStart[e.target + 1];
    for (int i = 0; i < n; ++i) revStart[i + 1] += revStart[i];
    revEdges.assign(edges.size(), 0);
    std::vector<int> fill(revStart.begin(), revStart.end() - 1);
    for (int p = 0; p < n; ++p)
      for (int i = edgeStart[p]; i < edgeEnd[p]; ++i)
        revEdges[fill[edges[i].target]++] = i;
  }

  int edge_source(int edgeIdx) const { return edges[edgeIdx].source; }

  Owner owner(int p) const { return game.owner[positions[p].state]; }

  // Attractor for P0 to the bankrupt set, avoiding frontier leaves and
  // energy-overflow (clamped) edges: exact-energy semantics.
  void compute_attr() {
    int n = static_cast<int>(positions.size());
    inAttr.assign(n, 0);
    attrRank.assign(n, -1);
    std::vector<int> pending(n, 0);
    std::vector<char> poisoned(n, 0);
    for (int p = 0; p < n; ++p) {
      if (cls[p] != Cls::Normal) continue;
      if (owner(p) == Owner::P1) {
        pending[p] = edgeEnd[p] - edgeStart[p];
        for (int i = edgeStart[p]; i < edgeEnd[p]; ++i)
          if (edges[i].clamped || cls[edges[i].target] == Cls::Frontier)
            poisoned[p] = 1;
      }
    }
    std::deque<int> queue;
    for (int p = 0; p < n; ++p)
      if (cls[p] == Cls::Bankrupt) {
        attrRank[p] = 0;
        queue.push_back(p);
      }
    // P1 positions with no moves: P0 wins immediately.
    for (int p = 0; p < n; ++p)
      if (cls[p] == Cls::Normal && owner(p) == Owner::P1 && pending[p] == 0 &&
          !poisoned[p]) {
        inAttr[p] = 1;
        attrRank[p] = 1;
        queue.push_back(p);
      }
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      int rank = attrRank[p];
      for (int ri = revStart[p]; ri < revStart[p + 1]; ++ri) {
        int ei = revEdges[ri];
        int src = edge_source(ei);
        if (cls[src] != Cls::Normal || inAttr[src]) continue;
        if (owner(src) == Owner::P0) {
          if (edges[ei].clamped) continue;
          inAttr[src] = 1;
          attrRank[src] = rank + 1;
          queue.push_back(src);
        } else {
          if (--pending[src] == 0 && !poisoned[src]) {
            inAttr[src] = 1;
            attrRank[src] = rank + 1;
            queue.push_back(src);
          }
        }
      }
    }
  }

  // Greatest set of positions from which P1 avoids bankrupt and frontier
  // forever; energies saturated at the cap (clamped edges allowed).
  void compute_safe() {
    int n = static_cast<int>(positions.size());
    inSafe.assign(n, 0);
    std::vector<int> safeCount(n, 0);
    std::deque<int> removal;
    for (int p = 0; p < n; ++p) {
      if (cls[p] != Cls::Normal) continue;
      inSafe[p] = 1;
      int good = 0, bad = 0;
      for (int i = edgeStart[p]; i < edgeEnd[p]; ++i)
        (cls[edges[i].target] == Cls::Normal ? good : bad) += 1;
      safeCount[p] = good;
      if (owner(p) == Owner::P1 ? good == 0 : bad > 0) {
        inSafe[p] = 0;
        removal.push_back(p);
      }
    }
    while (!removal.empty()) {
      int p = removal.front();
      removal.pop_front();
      for (int ri = revStart[p]; ri < revStart[p + 1]; ++ri) {
        int src = edge_source(revEdges[ri]);
        if (!inSafe[src]) continue;
        if (owner(src) == Owner::P0 || --safeCount[src] == 0) {
          inSafe[src] = 0;
          removal.push_back(src);
        }
      }
    }
  }

  void refresh() {
    expand_all();
    if (analysisFresh) return;
    build_reverse();
    compute_attr();
    compute_safe();
    analysisFresh = true;
  }

  std::string fmt(int p) const {
    PegConf c{positions[p].state, words.get(positions[p].word),
              energies.get(positions[p].energy)};
    return format_conf(game, c);
  }

  std::vector<StrategyEntry> extract_strategy(int init, Winner w) {
    std::vector<StrategyEntry> out;
    std::vector<char> seen(positions.size(), 0);
    std::deque<int> queue{init};
    seen[init] = 1;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      if (cls[p] != Cls::Normal) continue;
      bool choosing = (w == Winner::Win0) == (owner(p) == Owner::P0);
      if (choosing) {
        int best = -1;
        for (int i = edgeStart[p]; i < edgeEnd[p]; ++i) {
          const Edge& e = edges[i];
          if (w == Winner::Win0) {
            if (e.clamped) continue;
            bool winning = cls[e.target] == Cls::Bankrupt || inAttr[e.target];
            if (!winning) continue;
            if (best == -1 || attrRank[e.target] < attrRank[edges[best].target] ||
                (attrRank[e.target] == attrRank[edges[best].target] &&
                 e.trans < edges[best].trans))
              best = i;
          } else {
            if (cls[e.target] != Cls::Normal || !inSafe[e.target]) continue;
            if (best == -1 || e.trans < edges[best].trans) best = i;
          }
        }
        if (best == -1) continue;  // bankrupt reached or nothing to record
        out.push_back({fmt(p), edges[best].trans, fmt(edges[best].target)});
        if (!seen[edges[best].target]) {
          seen[edges[best].target] = 1;
          queue.push_back(edges[best].target);
        }
      } else {
        for (int i = edgeStart[p]; i < edgeEnd[p]; ++i) {
          int t = edges[i].target;
          if (w == Winner::Win0 && edges[i].clamped) continue;
          if (!seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
          }
        }
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.position < b.position;
    });
    return out;
  }

  Verdict solve(const PegConf& init) {
    int p = intern(init.state, init.stack, init.energy);
    refresh();
    Verdict v;
    v.boundsUsed = bounds;
    v.positionsExplored = static_cast<long long>(positions.size());
    if (cls[p] == Cls::Bankrupt) {
      v.winner = Winner::Win0;
      return v;
    }
    if (cls[p] == Cls::Frontier) return v;
    if (inAttr[p]) {
      v.winner = Winner::Win0;
      v.strategy = extract_strategy(p, Winner::Win0);
    } else if (inSafe[p]) {
      v.winner = Winner::Win1;
      v.strategy = extract_strategy(p, Winner::Win1);
    }
    return v;
  }
};

EnergyAnalysis::EnergyAnalysis(const Peg& g, Bounds b, long long budget)
    : impl_(std::make_unique<Impl>(g, b, budget)) {}
EnergyAnalysis::~EnergyAnalysis() = default;
EnergyAnalysis::EnergyAnalysis(EnergyAnalysis&&) noexcept = default;

Verdict EnergyAnalysis::solve(const PegConf& init) { return impl_->solve(init); }

long long EnergyAnalysis::positions_explored() const {
  return static_cast<long long>(impl_->positions.size());
}

Verdict solve_energy_bounded(const Peg& g, const PegConf& init, const Bounds& b,
                             long long budget) {
  EnergyAnalysis a(g, b, budget);
  return a.solve(init);
}

Verdict solve_energy_bounded(const Oceg& g, const OcegConf& init,
                             const Bounds& b, long long budget) {
  require_valid(validate(g), "energy game");
  Peg peg = oceg_to_peg(g);
  Bounds pb = b;
  // Counter m is encoded as stack cnt^m bot of height m+1.
  if (pb.counterCap < 1 << 29) pb.counterCap += 1;
  Verdict v = solve_energy_bounded(peg, oceg_conf_to_peg(init), pb, budget);
  v.boundsUsed = b;
  return v;
}

Verdict refine(const Verdict& previous, const Peg& g, const PegConf& init,
               const Bounds& larger) {
  if (!larger.dominates(previous.boundsUsed))
    throw BoundsNotLarger("refine bounds must dominate the previous bounds");
  return solve_energy_bounded(g, init, larger);
}

Verdict refine(const Verdict& previous, const Oceg& g, const OcegConf& init,
               const Bounds& larger) {
  if (!larger.dominates(previous.boundsUsed))
    throw BoundsNotLarger("refine bounds must dominate the previous bounds");
  return solve_energy_bounded(g, init, larger);
}

}  // namespace egsim
