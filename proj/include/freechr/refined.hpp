#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "freechr/program.hpp"
#include "freechr/value.hpp"

namespace freechr {

/// An activated store value traversing the program's head patterns.
struct ActiveItem {
  std::uint64_t id;
  Value value;
  int pattern_index;

  bool operator==(const ActiveItem& other) const {
    return id == other.id && value == other.value &&
           pattern_index == other.pattern_index;
  }
};

/// Query entries are either not-yet-activated values or active items.
using QueryItem = std::variant<Value, ActiveItem>;

using HistoryEntry = std::pair<std::string, std::vector<std::uint64_t>>;

/// Execution state of the refined semantics: the query (an execution stack,
/// head at the front), the store of identified values, the propagation
/// history and the next fresh identifier.
struct RefinedState {
  std::deque<QueryItem> query;
  std::map<std::uint64_t, Value> store;  // iterates in ascending id order
  std::set<HistoryEntry> history;
  std::uint64_t next_id = 1;

  bool operator==(const RefinedState& other) const = default;
  std::string show() const;
};

/// All goal values pending as inactive query items; empty store and history.
RefinedState initial_state(const ValueList& goal);

enum class EventKind { Activate, Apply, Default, Drop };

const char* event_kind_text(EventKind kind);

/// One applied transition. Activate events carry the freshly assigned id and
/// the activated value (its pattern index is always 1); Apply events
/// additionally carry the matched ids in head order and the body output.
struct TraceEvent {
  EventKind kind;
  std::optional<std::string> rule;  // Apply and Default only
  std::uint64_t active_id = 0;
  Value value = Value::integer(0);
  int pattern_index = 1;
  std::vector<std::uint64_t> matched_ids;  // Apply only
  ValueList body_values;                   // Apply only

  bool operator==(const TraceEvent& other) const = default;
  std::string show() const;
  /// One-line JSON with fields kind, rule, active_id, pattern_index,
  /// matched_ids, body, value.
  std::string to_jsonl() const;
};

/// Raised when a guard or body evaluation fails during execution. The
/// embedded constructors promise total functions, so this surfaces program
/// bugs (and EvalError in frontend-compiled guards/bodies).
class EngineError : public std::exception {
public:
  explicit EngineError(std::string message) : message_(std::move(message)) {}
  const char* what() const noexcept override { return message_.c_str(); }

private:
  std::string message_;
};

/// A complete rule matching: store ids and their values in head order.
struct Matching {
  std::vector<std::uint64_t> ids;
  ValueList values;
};

/// Finds the first matching of `rule` with head position `active_pos` fixed
/// to the active store entry. Positions are filled left-to-right in head
/// order, candidate store entries are tried in ascending id, every predicate
/// and the guard must accept, and (rule name, ids) must not be in the
/// history. Returns nullopt if no such matching exists (the Default case).
std::optional<Matching> find_matching(const IndexedRule& rule,
                                      std::uint64_t active_id,
                                      const Value& active_value,
                                      std::size_t active_pos,
                                      const RefinedState& state);

struct StepResult {
  RefinedState state;
  TraceEvent event;
};

/// One transition of the refined semantics, chosen deterministically:
/// empty query is terminal; an inactive head is activated; an active head
/// whose index exceeds the program's labels is dropped; otherwise the unique
/// rule holding the index is selected and either applied (first matching
/// wins) or the index advances by one. Throws EngineError when a guard or
/// body evaluation fails.
std::optional<StepResult> step(const EnumProgram& p, const RefinedState& s);

enum class RunStatus { Terminated, StepLimit, BodyError };

struct RunResult {
  RunStatus status = RunStatus::Terminated;
  RefinedState final_state;
  std::vector<TraceEvent> trace;
  std::string diagnostic;  // BodyError only
};

/// Enumerates p once and iterates `step` until terminal or the step limit.
RunResult run(const Program& p, const ValueList& goal,
              std::size_t max_steps = 1000000);

/// As RunResult, but with the state before the first and after every step
/// retained (states.size() == trace.size() + 1).
struct RecordedRun {
  RunStatus status = RunStatus::Terminated;
  std::vector<RefinedState> states;
  std::vector<TraceEvent> trace;
  std::string diagnostic;

  const RefinedState& final_state() const { return states.back(); }
};

RecordedRun run_recorded(const EnumProgram& p, const ValueList& goal,
                         std::size_t max_steps = 1000000);

}  // namespace freechr
