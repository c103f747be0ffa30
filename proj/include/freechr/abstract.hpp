#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freechr/program.hpp"
#include "freechr/refined.hpp"
#include "freechr/value.hpp"

namespace freechr {

/// A finite multiset of values in canonical form (sorted value -> count), so
/// equality is structural.
class Multiset {
public:
  Multiset() = default;
  explicit Multiset(const ValueList& values);

  void add(const Value& v, std::size_t n = 1);
  /// Removes one occurrence; false if the value is absent.
  bool remove(const Value& v);
  std::size_t count(const Value& v) const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const std::map<Value, std::size_t>& counts() const { return counts_; }

  bool operator==(const Multiset& other) const { return counts_ == other.counts_; }
  bool operator!=(const Multiset& other) const { return !(*this == other); }

  /// Ascending occurrence list: {3,3,(a,b)}.
  std::string show() const;

private:
  std::map<Value, std::size_t> counts_;
  std::size_t size_ = 0;
};

using AbstractState = Multiset;

/// Collapses a refined state to the multiset of live values: every store
/// value plus every inactive query value. Active query items contribute
/// nothing of their own; they are covered by their store entry or, once
/// removed, by nothing.
AbstractState abstract_r(const RefinedState& s);

/// One way to apply a rule abstractly: the selected values in head order and
/// the resulting state.
struct AbstractInstance {
  ValueList values;
  AbstractState result;
};

/// All ways (up to occurrence identity) to pick distinct occurrences for the
/// rule's head such that every head predicate and the guard accept; the
/// result drops the removed-matched occurrences and adds the body output.
/// Candidates are enumerated in a canonical order (value order per position).
std::vector<AbstractInstance> abstract_applicable(const FreeRule& rule,
                                                  const AbstractState& state);

struct AbstractRunResult {
  AbstractState state;
  bool step_limit = false;
  std::size_t steps = 0;
};

/// Repeatedly picks one applicable (rule, instance) uniformly at random from
/// the canonical candidate list and applies it, until no rule is applicable
/// or the step limit is hit. Deterministic for a given seed.
AbstractRunResult abstract_run(const Program& p, AbstractState state,
                               std::uint64_t seed, std::size_t max_steps = 100000);

struct Violation {
  std::size_t step;
  std::string reason;
};

/// Checks a recorded refined run against the abstract semantics, one event at
/// a time: Activate/Default/Drop steps must preserve the abstraction, and an
/// Apply step must change it by exactly the rule's abstract delta (the
/// removed-matched values leave, the recomputed body values enter) with all
/// head predicates and the guard accepting the matched values. Returns the
/// first violation, or nullopt if the whole trace is sound.
std::optional<Violation> check_refined_trace(const EnumProgram& p,
                                             const RecordedRun& run);

}  // namespace freechr
