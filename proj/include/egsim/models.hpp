#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "egsim/errors.hpp"

namespace egsim {

// Interned identifier table. Declared names occupy a prefix of the id space;
// names that were only referenced (e.g. by a transition in a JSON file) are
// interned after them so validate() can report the dangling references.
class NameTable {
 public:
  int declare(std::string_view name);
  int intern(std::string_view name);
  std::optional<int> find(std::string_view name) const;
  bool is_declared(int id) const { return id >= 0 && id < declared_; }
  const std::string& name(int id) const { return names_[id]; }
  int size() const { return static_cast<int>(names_.size()); }
  int declared_count() const { return declared_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int declared_ = 0;
};

struct Violation {
  std::string code;    // e.g. "NetHasZeroTest", "DeadlockAt"
  std::string detail;  // the offending element
};

// ---------------------------------------------------------------------------
// Machine descriptions

struct PdaTransition {
  int src = 0;
  int top = 0;
  int action = 0;
  int dst = 0;
  std::vector<int> push;  // push[0] is the new top; replaces `top`
};

struct Pda {
  NameTable states;
  NameTable stackSymbols;
  NameTable actions;
  std::vector<PdaTransition> transitions;
  int maxPush = 2;
};

struct OcaRule {
  int src = 0;
  int action = 0;
  int delta = 0;
  int dst = 0;
};

// One-counter automaton; with isNet set it is a one-counter net and must
// have no zero-test rules.
struct Oca {
  NameTable states;
  NameTable actions;
  std::vector<OcaRule> rules;      // delta in {-1,0,1}, enabled whenever m+delta >= 0
  std::vector<OcaRule> zeroRules;  // delta in {0,1}, enabled only at m == 0
  bool isNet = false;
};

struct VassTransition {
  int src = 0;
  int action = 0;
  int dst = 0;
  std::vector<int> effect;
};

struct Vass {
  int dimension = 1;
  NameTable states;
  NameTable actions;
  std::vector<VassTransition> transitions;
};

enum class Owner : uint8_t { P0 = 0, P1 = 1 };

struct PegTransition {
  int src = 0;
  int top = 0;
  int dst = 0;
  std::vector<int> push;
  std::vector<int> effect;  // per-coordinate in {-1,0,1}
};

// Pushdown energy game. Transition labels are intentionally absent: they do
// not influence energy-game semantics.
struct Peg {
  int dimension = 1;
  NameTable states;
  std::vector<Owner> owner;  // indexed by state id
  std::vector<std::string> ownerConflicts;
  NameTable stackSymbols;
  std::vector<PegTransition> transitions;
  int maxPush = 2;

  int add_state(std::string_view name, Owner o);
};

struct OcegRule {
  int src = 0;
  int counterDelta = 0;
  int dst = 0;
  std::vector<int> effect;
};

struct Oceg {
  int dimension = 1;
  NameTable states;
  std::vector<Owner> owner;
  std::vector<std::string> ownerConflicts;
  std::vector<OcegRule> rules;      // counterDelta in {-1,0,1}
  std::vector<OcegRule> zeroRules;  // counterDelta in {0,1}, only at counter 0

  int add_state(std::string_view name, Owner o);
};

struct McmRule {
  enum Kind : uint8_t { Inc, Test } kind = Inc;
  int counter = 1;  // 1 or 2
  int dst = 0;      // Inc target, or Test's if-zero target
  int dstPositive = 0;  // Test's if-positive target (counter is decremented)
};

// Deterministic Minsky 2-counter machine: one rule per non-halt state.
struct Mcm {
  NameTable states;
  int initState = 0;
  int haltState = 0;
  std::vector<std::optional<McmRule>> rule;  // indexed by state id
  std::vector<std::string> duplicateRules;

  void set_rule(int state, McmRule r);
};

// ---------------------------------------------------------------------------
// Configurations

struct PdaConf {
  int state = 0;
  std::vector<int> stack;  // stack[0] is the top; never empty
  bool operator==(const PdaConf&) const = default;
};

struct OcaConf {
  int state = 0;
  int counter = 0;
  bool operator==(const OcaConf&) const = default;
};

struct VassConf {
  int state = 0;
  std::vector<int> counters;
  bool operator==(const VassConf&) const = default;
};

struct PegConf {
  int state = 0;
  std::vector<int> stack;
  std::vector<int> energy;
  bool operator==(const PegConf&) const = default;
};

struct OcegConf {
  int state = 0;
  int counter = 0;
  std::vector<int> energy;
  bool operator==(const OcegConf&) const = default;
};

struct McmConf {
  int state = 0;
  long long c1 = 0;
  long long c2 = 0;
  bool operator==(const McmConf&) const = default;
};

using Configuration =
    std::variant<PdaConf, OcaConf, VassConf, PegConf, OcegConf, McmConf>;

// ---------------------------------------------------------------------------
// Validation. Violations are data, not failures: an empty list means all
// type invariants hold.

std::vector<Violation> validate(const Pda&);
std::vector<Violation> validate(const Oca&);
std::vector<Violation> validate(const Vass&);
std::vector<Violation> validate(const Peg&);
std::vector<Violation> validate(const Oceg&);
std::vector<Violation> validate(const Mcm&);

void require_valid(const std::vector<Violation>&, const char* what);

// ---------------------------------------------------------------------------
// Step semantics. Successors are listed in transition-id order (declaration
// order; for OCA the delta rules precede the zero rules in the id space).

struct PdaStep {
  int transition;
  int action;
  PdaConf to;
};
struct OcaStep {
  int transition;  // rule index; zero rules follow the delta rules
  int action;
  OcaConf to;
};
struct VassStep {
  int transition;
  int action;
  VassConf to;
};

std::vector<PdaStep> steps(const Pda&, const PdaConf&);
std::vector<OcaStep> steps(const Oca&, const OcaConf&);
std::vector<VassStep> steps(const Vass&, const VassConf&);

struct PegMove {
  int transition;
  PegConf to;
};
struct OcegMove {
  int transition;  // zero rules follow the delta rules in the id space
  OcegConf to;
};

// Game moves; positions with a negative energy coordinate are terminal and
// get no successors.
Owner owner_of(const Peg&, const PegConf&);
Owner owner_of(const Oceg&, const OcegConf&);
std::vector<PegMove> game_moves(const Peg&, const PegConf&);
std::vector<OcegMove> game_moves(const Oceg&, const OcegConf&);

// Minsky machine semantics. mcm_step returns nothing iff the configuration
// is at the halt state.
std::optional<McmConf> mcm_step(const Mcm&, const McmConf&);

struct McmRunResult {
  bool halted = false;
  long long steps = 0;  // meaningful iff halted
};
McmRunResult mcm_run(const Mcm&, long long maxSteps);

// ---------------------------------------------------------------------------
// Conversions and repairs

Oca vass1_to_ocn(const Vass&);  // requires dimension 1
Vass ocn_to_vass1(const Oca&);  // requires isNet

// Exact encoding of an OCA as a pushdown automaton over {cnt, bot}:
// counter m corresponds to stack cnt^m bot. Delta rules are replicated on
// both top symbols so the induced transition systems are isomorphic.
Pda oca_to_pda(const Oca&);
PdaConf oca_conf_to_pda(const Oca&, const OcaConf&);

Peg oceg_to_peg(const Oceg&);
PegConf oceg_conf_to_peg(const OcegConf&);

// Syntactic one-counter shape: a single working symbol plus a bottom symbol
// that is never pushed on top of anything or removed.
bool is_one_counter_shaped(const Pda&);
bool is_one_counter_shaped(const Peg&);

// Deadlock repair: neutral self-loops for P0, all-coordinates -1 loops for P1.
void complete_with_self_loops(Peg&);
void complete_with_self_loops(Oceg&);

// ---------------------------------------------------------------------------
// Formatting (used for strategy keys and reports; deterministic)

std::string format_conf(const Pda&, const PdaConf&);
std::string format_conf(const Oca&, const OcaConf&);
std::string format_conf(const Vass&, const VassConf&);
std::string format_conf(const Peg&, const PegConf&);
std::string format_conf(const Oceg&, const OcegConf&);
std::string format_conf(const Mcm&, const McmConf&);

}  // namespace egsim
