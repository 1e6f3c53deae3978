#include "egsim/models.hpp"

#include <algorithm>

namespace egsim {

int NameTable::declare(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) {
    // Re-declaring a referenced name promotes it into the declared prefix by
    // swapping it with the first undeclared entry.
    int id = it->second;
    if (id < declared_) return id;
    int slot = declared_;
    if (id != slot) {
      std::swap(names_[id], names_[slot]);
      index_[names_[id]] = id;
      index_[names_[slot]] = slot;
    }
    ++declared_;
    return slot;
  }
  if (declared_ == static_cast<int>(names_.size())) {
    names_.emplace_back(name);
    index_.emplace(names_.back(), declared_);
    return declared_++;
  }
  // Insert into the declared prefix, moving one undeclared name to the back.
  int slot = declared_;
  names_.push_back(names_[slot]);
  index_[names_.back()] = static_cast<int>(names_.size()) - 1;
  names_[slot] = std::string(name);
  index_[names_[slot]] = slot;
  ++declared_;
  return slot;
}

int NameTable::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  names_.emplace_back(name);
  int id = static_cast<int>(names_.size()) - 1;
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<int> NameTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Peg::add_state(std::string_view name, Owner o) {
  int id = states.declare(name);
  if (id < static_cast<int>(owner.size())) {
    if (owner[id] != o) ownerConflicts.push_back(states.name(id));
    return id;
  }
  owner.resize(id + 1, Owner::P0);
  owner[id] = o;
  return id;
}

int Oceg::add_state(std::string_view name, Owner o) {
  int id = states.declare(name);
  if (id < static_cast<int>(owner.size())) {
    if (owner[id] != o) ownerConflicts.push_back(states.name(id));
    return id;
  }
  owner.resize(id + 1, Owner::P0);
  owner[id] = o;
  return id;
}

void Mcm::set_rule(int state, McmRule r) {
  if (state >= static_cast<int>(rule.size())) rule.resize(state + 1);
  if (rule[state].has_value()) {
    duplicateRules.push_back(states.name(state));
    return;
  }
  rule[state] = r;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_ref(std::vector<Violation>& out, const NameTable& t, int id,
               const char* what) {
  if (!t.is_declared(id))
    out.push_back({std::string("Undeclared") + what, t.name(id)});
}

}  // namespace

std::vector<Violation> validate(const Pda& m) {
  std::vector<Violation> out;
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    check_ref(out, m.states, t.src, "State");
    check_ref(out, m.states, t.dst, "State");
    check_ref(out, m.stackSymbols, t.top, "Symbol");
    check_ref(out, m.actions, t.action, "Action");
    for (int s : t.push) check_ref(out, m.stackSymbols, s, "Symbol");
    if (static_cast<int>(t.push.size()) > m.maxPush)
      out.push_back({"PushTooLong", "transition " + std::to_string(i)});
  }
  return out;
}

std::vector<Violation> validate(const Oca& m) {
  std::vector<Violation> out;
  for (const auto& r : m.rules) {
    check_ref(out, m.states, r.src, "State");
    check_ref(out, m.states, r.dst, "State");
    check_ref(out, m.actions, r.action, "Action");
    if (r.delta < -1 || r.delta > 1)
      out.push_back({"DeltaOutOfRange", m.states.name(r.src)});
  }
  for (const auto& r : m.zeroRules) {
    check_ref(out, m.states, r.src, "State");
    check_ref(out, m.states, r.dst, "State");
    check_ref(out, m.actions, r.action, "Action");
    if (r.delta < 0 || r.delta > 1)
      out.push_back({"DeltaOutOfRange", m.states.name(r.src)});
  }
  if (m.isNet && !m.zeroRules.empty()) out.push_back({"NetHasZeroTest", ""});
  return out;
}

std::vector<Violation> validate(const Vass& m) {
  std::vector<Violation> out;
  if (m.dimension < 1) out.push_back({"BadDimension", std::to_string(m.dimension)});
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    check_ref(out, m.states, t.src, "State");
    check_ref(out, m.states, t.dst, "State");
    check_ref(out, m.actions, t.action, "Action");
    if (static_cast<int>(t.effect.size()) != m.dimension)
      out.push_back({"EffectDimensionMismatch", "transition " + std::to_string(i)});
    for (int e : t.effect)
      if (e < -1 || e > 1)
        out.push_back({"EffectOutOfRange", "transition " + std::to_string(i)});
  }
  return out;
}

namespace {

template <typename Game, typename Trans>
void validate_energy_common(std::vector<Violation>& out, const Game& g,
                            const std::vector<Trans>& transitions) {
  if (g.dimension < 1) out.push_back({"BadDimension", std::to_string(g.dimension)});
  for (const auto& s : g.ownerConflicts) out.push_back({"OwnershipOverlap", s});
  for (size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    check_ref(out, g.states, t.src, "State");
    check_ref(out, g.states, t.dst, "State");
    if (static_cast<int>(t.effect.size()) != g.dimension)
      out.push_back({"EffectDimensionMismatch", "transition " + std::to_string(i)});
    for (int e : t.effect)
      if (e < -1 || e > 1)
        out.push_back({"EffectOutOfRange", "transition " + std::to_string(i)});
  }
}

}  // namespace

std::vector<Violation> validate(const Peg& g) {
  std::vector<Violation> out;
  validate_energy_common(out, g, g.transitions);
  for (size_t i = 0; i < g.transitions.size(); ++i) {
    const auto& t = g.transitions[i];
    check_ref(out, g.stackSymbols, t.top, "Symbol");
    for (int s : t.push) check_ref(out, g.stackSymbols, s, "Symbol");
    if (static_cast<int>(t.push.size()) > g.maxPush)
      out.push_back({"PushTooLong", "transition " + std::to_string(i)});
  }
  // Deadlock-freedom: every (state, symbol) pair needs a successor.
  int ns = g.states.declared_count(), nsym = g.stackSymbols.declared_count();
  std::vector<char> covered(static_cast<size_t>(ns) * nsym, 0);
  for (const auto& t : g.transitions)
    if (g.states.is_declared(t.src) && g.stackSymbols.is_declared(t.top))
      covered[static_cast<size_t>(t.src) * nsym + t.top] = 1;
  for (int q = 0; q < ns; ++q)
    for (int x = 0; x < nsym; ++x)
      if (!covered[static_cast<size_t>(q) * nsym + x])
        out.push_back({"DeadlockAt",
                       g.states.name(q) + "," + g.stackSymbols.name(x)});
  return out;
}

std::vector<Violation> validate(const Oceg& g) {
  std::vector<Violation> out;
  if (g.dimension < 1) out.push_back({"BadDimension", std::to_string(g.dimension)});
  for (const auto& s : g.ownerConflicts) out.push_back({"OwnershipOverlap", s});
  auto check_rules = [&](const std::vector<OcegRule>& rules, int minDelta) {
    for (size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      check_ref(out, g.states, r.src, "State");
      check_ref(out, g.states, r.dst, "State");
      if (static_cast<int>(r.effect.size()) != g.dimension)
        out.push_back({"EffectDimensionMismatch", "rule " + std::to_string(i)});
      for (int e : r.effect)
        if (e < -1 || e > 1)
          out.push_back({"EffectOutOfRange", "rule " + std::to_string(i)});
      if (r.counterDelta < minDelta || r.counterDelta > 1)
        out.push_back({"DeltaOutOfRange", g.states.name(r.src)});
    }
  };
  check_rules(g.rules, -1);
  check_rules(g.zeroRules, 0);
  // Deadlock-freedom at the two counter regimes (0 and >= 1). This is checked
  // for all states, a conservative superset of the reachable ones.
  int ns = g.states.declared_count();
  std::vector<char> atPos(ns, 0), atZero(ns, 0);
  for (const auto& r : g.rules) {
    if (!g.states.is_declared(r.src)) continue;
    atPos[r.src] = 1;
    if (r.counterDelta >= 0) atZero[r.src] = 1;
  }
  for (const auto& r : g.zeroRules)
    if (g.states.is_declared(r.src)) atZero[r.src] = 1;
  for (int q = 0; q < ns; ++q) {
    if (!atPos[q]) out.push_back({"DeadlockAt", g.states.name(q) + ",counter>0"});
    if (!atZero[q]) out.push_back({"DeadlockAt", g.states.name(q) + ",counter=0"});
  }
  return out;
}

std::vector<Violation> validate(const Mcm& m) {
  std::vector<Violation> out;
  int ns = m.states.declared_count();
  if (!m.states.is_declared(m.initState)) out.push_back({"UndeclaredState", "init"});
  if (!m.states.is_declared(m.haltState)) out.push_back({"UndeclaredState", "halt"});
  for (const auto& s : m.duplicateRules) out.push_back({"DuplicateRule", s});
  for (int q = 0; q < ns; ++q) {
    bool has = q < static_cast<int>(m.rule.size()) && m.rule[q].has_value();
    if (q == m.haltState) {
      if (has) out.push_back({"HaltHasRule", m.states.name(q)});
      continue;
    }
    if (!has) {
      out.push_back({"MissingRule", m.states.name(q)});
      continue;
    }
    const McmRule& r = *m.rule[q];
    if (r.counter != 1 && r.counter != 2)
      out.push_back({"BadCounterIndex", m.states.name(q)});
    check_ref(out, m.states, r.dst, "State");
    if (r.kind == McmRule::Test) check_ref(out, m.states, r.dstPositive, "State");
  }
  return out;
}

void require_valid(const std::vector<Violation>& vs, const char* what) {
  if (vs.empty()) return;
  std::string msg = std::string(what) + " failed validation:";
  for (const auto& v : vs) msg += " " + v.code + "(" + v.detail + ")";
  throw InvalidModel(msg);
}

// ---------------------------------------------------------------------------
// Step semantics

std::vector<PdaStep> steps(const Pda& m, const PdaConf& c) {
  std::vector<PdaStep> out;
  if (c.stack.empty()) return out;
  int top = c.stack[0];
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.src != c.state || t.top != top) continue;
    // A step that would empty the stack leaves the state space (Q x Gamma+)
    // and is omitted.
    if (t.push.empty() && c.stack.size() == 1) continue;
    PdaConf next;
    next.state = t.dst;
    next.stack.reserve(t.push.size() + c.stack.size() - 1);
    next.stack.insert(next.stack.end(), t.push.begin(), t.push.end());
    next.stack.insert(next.stack.end(), c.stack.begin() + 1, c.stack.end());
    out.push_back({static_cast<int>(i), t.action, std::move(next)});
  }
  return out;
}

std::vector<OcaStep> steps(const Oca& m, const OcaConf& c) {
  std::vector<OcaStep> out;
  int base = static_cast<int>(m.rules.size());
  for (size_t i = 0; i < m.rules.size(); ++i) {
    const auto& r = m.rules[i];
    if (r.src != c.state) continue;
    int next = c.counter + r.delta;
    if (next < 0) continue;
    out.push_back({static_cast<int>(i), r.action, {r.dst, next}});
  }
  if (c.counter == 0) {
    for (size_t i = 0; i < m.zeroRules.size(); ++i) {
      const auto& r = m.zeroRules[i];
      if (r.src != c.state) continue;
      out.push_back({base + static_cast<int>(i), r.action, {r.dst, r.delta}});
    }
  }
  return out;
}

std::vector<VassStep> steps(const Vass& m, const VassConf& c) {
  std::vector<VassStep> out;
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.src != c.state) continue;
    VassConf next{t.dst, c.counters};
    bool ok = true;
    for (int d = 0; d < m.dimension; ++d) {
      next.counters[d] += t.effect[d];
      if (next.counters[d] < 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    out.push_back({static_cast<int>(i), t.action, std::move(next)});
  }
  return out;
}

Owner owner_of(const Peg& g, const PegConf& c) { return g.owner[c.state]; }
Owner owner_of(const Oceg& g, const OcegConf& c) { return g.owner[c.state]; }

namespace {
bool any_negative(const std::vector<int>& e) {
  for (int x : e)
    if (x < 0) return true;
  return false;
}
}  // namespace

std::vector<PegMove> game_moves(const Peg& g, const PegConf& c) {
  std::vector<PegMove> out;
  if (any_negative(c.energy)) return out;  // terminal, Player 0 has won
  if (c.stack.empty()) return out;
  int top = c.stack[0];
  for (size_t i = 0; i < g.transitions.size(); ++i) {
    const auto& t = g.transitions[i];
    if (t.src != c.state || t.top != top) continue;
    if (t.push.empty() && c.stack.size() == 1) continue;
    PegConf next;
    next.state = t.dst;
    next.stack.reserve(t.push.size() + c.stack.size() - 1);
    next.stack.insert(next.stack.end(), t.push.begin(), t.push.end());
    next.stack.insert(next.stack.end(), c.stack.begin() + 1, c.stack.end());
    next.energy = c.energy;
    for (int d = 0; d < g.dimension; ++d) next.energy[d] += t.effect[d];
    out.push_back({static_cast<int>(i), std::move(next)});
  }
  return out;
}

std::vector<OcegMove> game_moves(const Oceg& g, const OcegConf& c) {
  std::vector<OcegMove> out;
  if (any_negative(c.energy)) return out;
  int base = static_cast<int>(g.rules.size());
  for (size_t i = 0; i < g.rules.size(); ++i) {
    const auto& r = g.rules[i];
    if (r.src != c.state) continue;
    int next = c.counter + r.counterDelta;
    if (next < 0) continue;
    OcegConf nc{r.dst, next, c.energy};
    for (int d = 0; d < g.dimension; ++d) nc.energy[d] += r.effect[d];
    out.push_back({static_cast<int>(i), std::move(nc)});
  }
  if (c.counter == 0) {
    for (size_t i = 0; i < g.zeroRules.size(); ++i) {
      const auto& r = g.zeroRules[i];
      if (r.src != c.state) continue;
      OcegConf nc{r.dst, r.counterDelta, c.energy};
      for (int d = 0; d < g.dimension; ++d) nc.energy[d] += r.effect[d];
      out.push_back({base + static_cast<int>(i), std::move(nc)});
    }
  }
  return out;
}

std::optional<McmConf> mcm_step(const Mcm& m, const McmConf& c) {
  if (c.state == m.haltState) return std::nullopt;
  const McmRule& r = *m.rule[c.state];
  McmConf next = c;
  long long& v = (r.counter == 1) ? next.c1 : next.c2;
  if (r.kind == McmRule::Inc) {
    ++v;
    next.state = r.dst;
  } else if (v == 0) {
    next.state = r.dst;
  } else {
    --v;
    next.state = r.dstPositive;
  }
  return next;
}

McmRunResult mcm_run(const Mcm& m, long long maxSteps) {
  McmConf c{m.initState, 0, 0};
  for (long long k = 0; k <= maxSteps; ++k) {
    auto next = mcm_step(m, c);
    if (!next) return {true, k};
    if (k == maxSteps) break;
    c = *next;
  }
  return {false, 0};
}

// ---------------------------------------------------------------------------
// Conversions

Oca vass1_to_ocn(const Vass& v) {
  if (v.dimension != 1) throw KindMismatch("vass1_to_ocn requires dimension 1");
  Oca out;
  out.isNet = true;
  for (const auto& s : v.states.names()) out.states.declare(s);
  for (const auto& a : v.actions.names()) out.actions.declare(a);
  for (const auto& t : v.transitions)
    out.rules.push_back({t.src, t.action, t.effect[0], t.dst});
  return out;
}

Vass ocn_to_vass1(const Oca& a) {
  if (!a.isNet) throw KindMismatch("ocn_to_vass1 requires a net");
  Vass out;
  out.dimension = 1;
  for (const auto& s : a.states.names()) out.states.declare(s);
  for (const auto& x : a.actions.names()) out.actions.declare(x);
  for (const auto& r : a.rules)
    out.transitions.push_back({r.src, r.action, r.dst, {r.delta}});
  return out;
}

Pda oca_to_pda(const Oca& a) {
  Pda out;
  for (const auto& s : a.states.names()) out.states.declare(s);
  for (const auto& x : a.actions.names()) out.actions.declare(x);
  int cnt = out.stackSymbols.declare("cnt");
  int bot = out.stackSymbols.declare("bot");
  auto pushWord = [&](int delta, bool onBottom) {
    std::vector<int> w;
    for (int i = 0; i < delta + 1; ++i) w.push_back(cnt);
    if (onBottom) {
      w.clear();
      for (int i = 0; i < delta; ++i) w.push_back(cnt);
      w.push_back(bot);
    }
    return w;
  };
  for (const auto& r : a.rules) {
    out.transitions.push_back({r.src, cnt, r.action, r.dst, pushWord(r.delta, false)});
    if (r.delta >= 0)
      out.transitions.push_back({r.src, bot, r.action, r.dst, pushWord(r.delta, true)});
  }
  for (const auto& r : a.zeroRules)
    out.transitions.push_back({r.src, bot, r.action, r.dst, pushWord(r.delta, true)});
  return out;
}

PdaConf oca_conf_to_pda(const Oca&, const OcaConf& c) {
  PdaConf out;
  out.state = c.state;
  out.stack.assign(c.counter, 0);  // cnt is symbol 0 by construction
  out.stack.push_back(1);          // bot
  return out;
}

Peg oceg_to_peg(const Oceg& g) {
  Peg out;
  out.dimension = g.dimension;
  for (int q = 0; q < g.states.declared_count(); ++q)
    out.add_state(g.states.name(q), g.owner[q]);
  int cnt = out.stackSymbols.declare("cnt");
  int bot = out.stackSymbols.declare("bot");
  for (const auto& r : g.rules) {
    std::vector<int> w;
    for (int i = 0; i < r.counterDelta + 1; ++i) w.push_back(cnt);
    out.transitions.push_back({r.src, cnt, r.dst, w, r.effect});
    if (r.counterDelta >= 0) {
      std::vector<int> wb;
      for (int i = 0; i < r.counterDelta; ++i) wb.push_back(cnt);
      wb.push_back(bot);
      out.transitions.push_back({r.src, bot, r.dst, wb, r.effect});
    }
  }
  for (const auto& r : g.zeroRules) {
    std::vector<int> wb;
    for (int i = 0; i < r.counterDelta; ++i) wb.push_back(cnt);
    wb.push_back(bot);
    out.transitions.push_back({r.src, bot, r.dst, wb, r.effect});
  }
  return out;
}

PegConf oceg_conf_to_peg(const OcegConf& c) {
  PegConf out;
  out.state = c.state;
  out.stack.assign(c.counter, 0);
  out.stack.push_back(1);
  out.energy = c.energy;
  return out;
}

namespace {

// Shape: exactly two stack symbols where `bot` only ever occurs at the word
// end and is preserved, and `sym` words never contain bot.
bool one_counter_shape(int nsym, auto&& transitions) {
  if (nsym != 2) return false;
  // Try both assignments of (sym, bot).
  for (int bot = 0; bot < 2; ++bot) {
    int sym = 1 - bot;
    bool ok = true;
    for (const auto& t : transitions) {
      if (t.top == sym) {
        for (int s : t.push)
          if (s == bot) ok = false;
      } else {
        if (t.push.empty() || t.push.back() != bot) ok = false;
        for (size_t i = 0; i + 1 < t.push.size(); ++i)
          if (t.push[i] == bot) ok = false;
      }
      if (!ok) break;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool is_one_counter_shaped(const Pda& m) {
  return one_counter_shape(m.stackSymbols.declared_count(), m.transitions);
}

bool is_one_counter_shaped(const Peg& g) {
  return one_counter_shape(g.stackSymbols.declared_count(), g.transitions);
}

void complete_with_self_loops(Peg& g) {
  int ns = g.states.declared_count(), nsym = g.stackSymbols.declared_count();
  std::vector<char> covered(static_cast<size_t>(ns) * nsym, 0);
  for (const auto& t : g.transitions)
    if (g.states.is_declared(t.src) && g.stackSymbols.is_declared(t.top))
      covered[static_cast<size_t>(t.src) * nsym + t.top] = 1;
  for (int q = 0; q < ns; ++q)
    for (int x = 0; x < nsym; ++x)
      if (!covered[static_cast<size_t>(q) * nsym + x]) {
        std::vector<int> eff(g.dimension, g.owner[q] == Owner::P0 ? 0 : -1);
        g.transitions.push_back({q, x, q, {x}, eff});
      }
}

void complete_with_self_loops(Oceg& g) {
  int ns = g.states.declared_count();
  std::vector<char> atPos(ns, 0), atZero(ns, 0);
  for (const auto& r : g.rules) {
    atPos[r.src] = 1;
    if (r.counterDelta >= 0) atZero[r.src] = 1;
  }
  for (const auto& r : g.zeroRules) atZero[r.src] = 1;
  for (int q = 0; q < ns; ++q)
    if (!atPos[q] || !atZero[q]) {
      std::vector<int> eff(g.dimension, g.owner[q] == Owner::P0 ? 0 : -1);
      g.rules.push_back({q, 0, q, eff});
    }
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string join_stack(const NameTable& syms, const std::vector<int>& stack) {
  std::string out;
  for (size_t i = 0; i < stack.size(); ++i) {
    if (i) out += '.';
    out += syms.name(stack[i]);
  }
  return out;
}

std::string join_vec(const std::vector<int>& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out + ")";
}

}  // namespace

std::string format_conf(const Pda& m, const PdaConf& c) {
  return m.states.name(c.state) + "/" + join_stack(m.stackSymbols, c.stack);
}
std::string format_conf(const Oca& m, const OcaConf& c) {
  return m.states.name(c.state) + "/" + std::to_string(c.counter);
}
std::string format_conf(const Vass& m, const VassConf& c) {
  return m.states.name(c.state) + "/" + join_vec(c.counters);
}
std::string format_conf(const Peg& g, const PegConf& c) {
  return g.states.name(c.state) + "/" + join_stack(g.stackSymbols, c.stack) +
         "/" + join_vec(c.energy);
}
std::string format_conf(const Oceg& g, const OcegConf& c) {
  return g.states.name(c.state) + "/" + std::to_string(c.counter) + "/" +
         join_vec(c.energy);
}
std::string format_conf(const Mcm& m, const McmConf& c) {
  return m.states.name(c.state) + "/(" + std::to_string(c.c1) + "," +
         std::to_string(c.c2) + ")";
}

}  // namespace egsim
