#include "freechr/abstract.hpp"

#include <random>
#include <sstream>

#include "freechr/term.hpp"

namespace freechr {

Multiset::Multiset(const ValueList& values) {
  for (const auto& v : values) add(v);
}

void Multiset::add(const Value& v, std::size_t n) {
  if (n == 0) return;
  counts_[v] += n;
  size_ += n;
}

bool Multiset::remove(const Value& v) {
  auto it = counts_.find(v);
  if (it == counts_.end()) return false;
  if (--it->second == 0) counts_.erase(it);
  --size_;
  return true;
}

std::size_t Multiset::count(const Value& v) const {
  auto it = counts_.find(v);
  return it == counts_.end() ? 0 : it->second;
}

std::string Multiset::show() const {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [v, n] : counts_) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!first) out << ",";
      first = false;
      out << v.show();
    }
  }
  out << "}";
  return out.str();
}

AbstractState abstract_r(const RefinedState& s) {
  Multiset m;
  for (const auto& [id, v] : s.store) m.add(v);
  for (const auto& item : s.query)
    if (auto* v = std::get_if<Value>(&item)) m.add(*v);
  return m;
}

std::vector<AbstractInstance> abstract_applicable(const FreeRule& rule,
                                                  const AbstractState& state) {
  const std::size_t head_count = rule.head_count();
  std::vector<AbstractInstance> out;
  ValueList picked(head_count, Value::integer(0));
  // Occurrence bookkeeping: how many copies of each value are already used.
  std::map<Value, std::size_t> used;

  // Enumerating distinct values per position (with multiplicity limits)
  // yields every selection of distinct occurrences exactly once up to
  // occurrence identity.
  auto fill = [&](std::size_t pos, const auto& self) -> void {
    if (pos == head_count) {
      if (!rule.guard(picked)) return;
      AbstractInstance inst;
      inst.values = picked;
      inst.result = state;
      for (std::size_t i = rule.kept.size(); i < head_count; ++i)
        inst.result.remove(picked[i]);
      for (const auto& v : rule.body(picked)) inst.result.add(v);
      out.push_back(std::move(inst));
      return;
    }
    for (const auto& [v, n] : state.counts()) {
      if (used[v] >= n) continue;
      if (!rule.head_at(pos).test(v)) continue;
      ++used[v];
      picked[pos] = v;
      self(pos + 1, self);
      --used[v];
    }
  };
  fill(0, fill);
  return out;
}

AbstractRunResult abstract_run(const Program& p, AbstractState state,
                               std::uint64_t seed, std::size_t max_steps) {
  auto rules = p.rules();
  std::mt19937_64 rng(seed);
  AbstractRunResult out;
  out.state = std::move(state);
  for (;;) {
    std::vector<AbstractInstance> candidates;
    for (const auto& rule : rules) {
      auto insts = abstract_applicable(*rule, out.state);
      candidates.insert(candidates.end(), std::make_move_iterator(insts.begin()),
                        std::make_move_iterator(insts.end()));
    }
    if (candidates.empty()) return out;
    if (out.steps >= max_steps) {
      out.step_limit = true;
      return out;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    out.state = std::move(candidates[pick(rng)].result);
    ++out.steps;
  }
}

namespace {

std::optional<Violation> check_apply(const EnumProgram& p, std::size_t i,
                                     const RefinedState& before,
                                     const RefinedState& after,
                                     const TraceEvent& ev) {
  auto fail = [i](std::string reason) -> std::optional<Violation> {
    return Violation{i, std::move(reason)};
  };
  if (!ev.rule) return fail("apply event without a rule name");
  const IndexedRule* rule = p.find_rule(*ev.rule);
  if (!rule) return fail("apply event names unknown rule '" + *ev.rule + "'");
  const FreeRule& r = *rule->rule;
  if (ev.matched_ids.size() != r.head_count())
    return fail("apply event for '" + r.name + "' has " +
                std::to_string(ev.matched_ids.size()) + " matched ids, head count is " +
                std::to_string(r.head_count()));

  ValueList matched;
  for (auto id : ev.matched_ids) {
    auto it = before.store.find(id);
    if (it == before.store.end())
      return fail("matched id " + std::to_string(id) + " is not in the store");
    matched.push_back(it->second);
  }
  for (std::size_t a = 0; a < matched.size(); ++a)
    if (!r.head_at(a).test(matched[a]))
      return fail("head predicate " + std::to_string(a + 1) + " of '" + r.name +
                  "' rejects " + matched[a].show());
  if (!r.guard(matched)) return fail("guard of '" + r.name + "' rejects the matching");

  ValueList body = r.body(matched);
  if (body != ev.body_values)
    return fail("recorded body output differs from the rule body for '" + r.name + "'");

  AbstractState expected = abstract_r(before);
  for (std::size_t a = r.kept.size(); a < matched.size(); ++a)
    if (!expected.remove(matched[a]))
      return fail("removed value " + matched[a].show() + " missing from abstraction");
  for (const auto& v : body) expected.add(v);

  if (expected != abstract_r(after))
    return fail("abstract state after apply is " + abstract_r(after).show() +
                ", expected " + expected.show());
  return std::nullopt;
}

}  // namespace

std::optional<Violation> check_refined_trace(const EnumProgram& p,
                                             const RecordedRun& run) {
  if (run.states.size() != run.trace.size() + 1)
    return Violation{0, "recorded run is missing state snapshots"};
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const RefinedState& before = run.states[i];
    const RefinedState& after = run.states[i + 1];
    const TraceEvent& ev = run.trace[i];
    switch (ev.kind) {
      case EventKind::Activate:
      case EventKind::Default:
      case EventKind::Drop:
        // Reflexive cases: the abstraction must be unchanged.
        if (abstract_r(before) != abstract_r(after))
          return Violation{i, std::string(event_kind_text(ev.kind)) +
                                  " step changed the abstract state from " +
                                  abstract_r(before).show() + " to " +
                                  abstract_r(after).show()};
        break;
      case EventKind::Apply: {
        std::optional<Violation> v;
        try {
          v = check_apply(p, i, before, after, ev);
        } catch (const EvalError& e) {
          v = Violation{i, std::string("guard or body crashed while re-checking: ") +
                               e.what()};
        }
        if (v) return v;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace freechr
