#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "freechr/program.hpp"
#include "freechr/refined.hpp"
#include "freechr/term.hpp"
#include "freechr/value.hpp"

namespace freechr {

/// A textual ground rewriting rule: head patterns are constructor terms, the
/// guard is one boolean term and the body a list of terms. Guards and bodies
/// may only use variables bound by the heads (range restriction).
struct ClassicRule {
  std::string name;
  TermList kept;
  TermList removed;
  TermPtr guard;  // boolean term; literal true when omitted
  TermList body;

  std::size_t head_count() const { return kept.size() + removed.size(); }
  const Term& head_at(std::size_t a) const {
    return a < kept.size() ? *kept[a] : *removed[a - kept.size()];
  }
};

/// Checks name, head presence, pattern shape and range restriction; returns
/// an error message or nullopt.
std::optional<std::string> validate_classic_rule(const ClassicRule& rule);

/// A classic rule with enumerated head patterns (same indexing convention as
/// `enumerate`: removed right-to-left first, then kept right-to-left).
struct EnumClassicRule {
  ClassicRule rule;
  std::vector<int> kept_indices;
  std::vector<int> removed_indices;

  int index_at(std::size_t a) const {
    return a < kept_indices.size() ? kept_indices[a]
                                   : removed_indices[a - kept_indices.size()];
  }
  std::set<int> labels() const;
};

std::vector<EnumClassicRule> enum_classic(const std::vector<ClassicRule>& rules);
std::set<int> labels_classic(const std::vector<EnumClassicRule>& rules);

/// A fully instantiated rule: ground head values, the guard's truth value
/// and, when the guard holds, the evaluated body values.
struct CInstance {
  std::string name;
  ValueList kept_values;
  ValueList removed_values;
  bool guard_holds = false;
  ValueList body_values;  // only meaningful when guard_holds
};

/// Matches the rule's heads left-to-right against `values` (accumulating one
/// substitution, so nonlinear variables must agree), then evaluates guard and
/// body under it. Returns nullopt when some head does not match. Guard and
/// body evaluation errors propagate as EvalError.
std::optional<CInstance> ground_instance(const ClassicRule& rule,
                                         const ValueList& values);

/// The image of one FreeCHR rule under the embedding: the head predicates
/// are folded pointwise into the guard, the body is carried over unchanged
/// and the pattern indices are preserved. Head positions keep their
/// kept/removed split but carry no predicates of their own.
struct EmbeddedRule {
  std::string name;
  std::size_t kept_count = 0;
  std::size_t removed_count = 0;
  std::vector<int> indices;  // per head position, in head order
  std::function<bool(const ValueList&)> combined_guard;
  std::function<ValueList(const ValueList&)> body;
  std::string guard_descriptor;
  std::string body_descriptor;

  std::size_t head_count() const { return kept_count + removed_count; }
  std::set<int> labels() const { return {indices.begin(), indices.end()}; }
};

/// Embeds an enumerated FreeCHR program into a sequence of classical
/// enumerated rules, in textual order. The combined guard checks the head
/// predicates pointwise (left to right, stopping at the first failure) and
/// then the original guard.
std::vector<EmbeddedRule> theta_embed(const EnumProgram& p);

/// One line per rule:
/// `name @ #idx.. \ #idx.. <=> <combined-guard descriptor> | <body descriptor>`.
std::string embed_dump(const std::vector<EmbeddedRule>& rules);

/// One transition of the classical refined engine over embedded rules. Same
/// decision ladder and deterministic matching policy as `step`, except that
/// matchings are filtered by the combined guard alone.
std::optional<StepResult> step_classic(const std::vector<EmbeddedRule>& rules,
                                       const RefinedState& s);

struct Divergence {
  std::size_t step;
  std::string reason;
};

struct EquivalenceReport {
  std::optional<Divergence> divergence;  // nullopt means OK
  std::size_t steps = 0;
  bool step_limit = false;

  bool ok() const { return !divergence.has_value(); }
};

/// Runs the FreeCHR refined engine and the classical engine on the embedded
/// program from the same initial state in lockstep and asserts identical
/// events and identical states after every step.
EquivalenceReport check_equivalence(const Program& p, const ValueList& goal,
                                    std::size_t max_steps = 1000000);

}  // namespace freechr
