#include "freechr/refined.hpp"

#include <sstream>

#include "freechr/term.hpp"
#include "json.hpp"

namespace freechr {

RefinedState initial_state(const ValueList& goal) {
  RefinedState s;
  for (const auto& v : goal) s.query.emplace_back(v);
  return s;
}

const char* event_kind_text(EventKind kind) {
  switch (kind) {
    case EventKind::Activate: return "activate";
    case EventKind::Apply: return "apply";
    case EventKind::Default: return "default";
    case EventKind::Drop: return "drop";
  }
  return "?";
}

std::string RefinedState::show() const {
  std::ostringstream out;
  out << "query=[";
  bool first = true;
  for (const auto& item : query) {
    if (!first) out << ", ";
    first = false;
    if (auto* v = std::get_if<Value>(&item)) {
      out << v->show();
    } else {
      const auto& a = std::get<ActiveItem>(item);
      out << "(" << a.id << "," << a.value.show() << ")#" << a.pattern_index;
    }
  }
  out << "] store={";
  first = true;
  for (const auto& [id, v] : store) {
    if (!first) out << ", ";
    first = false;
    out << id << ":" << v.show();
  }
  out << "} history={";
  first = true;
  for (const auto& [name, ids] : history) {
    if (!first) out << ", ";
    first = false;
    out << name << "[";
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    out << "]";
  }
  out << "} next=" << next_id;
  return out.str();
}

std::string TraceEvent::show() const {
  std::ostringstream out;
  out << event_kind_text(kind) << " (" << active_id << "," << value.show() << ")#"
      << pattern_index;
  if (rule) out << " rule=" << *rule;
  if (kind == EventKind::Apply) {
    out << " matched=[";
    for (std::size_t i = 0; i < matched_ids.size(); ++i)
      out << (i ? "," : "") << matched_ids[i];
    out << "] body=[";
    for (std::size_t i = 0; i < body_values.size(); ++i)
      out << (i ? "," : "") << body_values[i].show();
    out << "]";
  }
  return out.str();
}

std::string TraceEvent::to_jsonl() const {
  nlohmann::ordered_json j;
  j["kind"] = event_kind_text(kind);
  j["rule"] = rule ? nlohmann::ordered_json(*rule) : nlohmann::ordered_json(nullptr);
  j["active_id"] = active_id;
  j["pattern_index"] = pattern_index;
  if (kind == EventKind::Apply) {
    j["matched_ids"] = matched_ids;
    auto body = nlohmann::ordered_json::array();
    for (const auto& v : body_values) body.push_back(v.render());
    j["body"] = body;
  } else {
    j["matched_ids"] = nullptr;
    j["body"] = nullptr;
  }
  j["value"] = value.render();
  return j.dump();
}

std::optional<Matching> find_matching(const IndexedRule& rule,
                                      std::uint64_t active_id,
                                      const Value& active_value,
                                      std::size_t active_pos,
                                      const RefinedState& state) {
  const FreeRule& r = *rule.rule;
  const std::size_t head_count = r.head_count();

  // The active entry must still be in the store (K ⊎ R is a store subset).
  if (state.store.find(active_id) == state.store.end()) return std::nullopt;
  if (!r.head_at(active_pos).test(active_value)) return std::nullopt;

  Matching m;
  m.ids.assign(head_count, 0);
  m.values.assign(head_count, Value::integer(0));
  m.ids[active_pos] = active_id;
  m.values[active_pos] = active_value;

  auto id_used = [&](std::uint64_t id, std::size_t upto) {
    if (id == active_id) return true;
    for (std::size_t i = 0; i < upto; ++i)
      if (i != active_pos && m.ids[i] == id) return true;
    return false;
  };

  // Depth-first search, positions left-to-right, candidates in ascending id;
  // the first complete matching that passes the guard and the history wins.
  auto fill = [&](std::size_t pos, const auto& self) -> bool {
    if (pos == head_count) {
      if (!r.guard(m.values)) return false;
      if (state.history.count({r.name, m.ids})) return false;
      return true;
    }
    if (pos == active_pos) return self(pos + 1, self);
    for (const auto& [id, value] : state.store) {
      if (id_used(id, pos)) continue;
      if (!r.head_at(pos).test(value)) continue;
      m.ids[pos] = id;
      m.values[pos] = value;
      if (self(pos + 1, self)) return true;
    }
    return false;
  };
  if (fill(0, fill)) return m;
  return std::nullopt;
}

std::optional<StepResult> step(const EnumProgram& p, const RefinedState& s) {
  if (s.query.empty()) return std::nullopt;

  StepResult out{s, TraceEvent{}};
  RefinedState& next = out.state;
  TraceEvent& ev = out.event;

  if (auto* inactive = std::get_if<Value>(&s.query.front())) {
    std::uint64_t id = s.next_id;
    next.query.front() = ActiveItem{id, *inactive, 1};
    next.store.emplace(id, *inactive);
    next.next_id = id + 1;
    ev = TraceEvent{EventKind::Activate, std::nullopt, id, *inactive, 1, {}, {}};
    return out;
  }

  const ActiveItem active = std::get<ActiveItem>(s.query.front());
  auto lookup = p.rule_for_label(active.pattern_index);
  if (!lookup) {
    next.query.pop_front();
    ev = TraceEvent{EventKind::Drop, std::nullopt, active.id,
                    active.value,    active.pattern_index, {}, {}};
    return out;
  }

  const IndexedRule& rule = *lookup->rule;
  std::optional<Matching> m;
  try {
    m = find_matching(rule, active.id, active.value, lookup->head_pos, s);
  } catch (const EvalError& e) {
    throw EngineError("guard failed in rule '" + rule.rule->name + "': " + e.what());
  }

  if (!m) {
    std::get<ActiveItem>(next.query.front()).pattern_index += 1;
    ev = TraceEvent{EventKind::Default, rule.rule->name, active.id,
                    active.value,       active.pattern_index, {}, {}};
    return out;
  }

  ValueList body_values;
  try {
    body_values = rule.rule->body(m->values);
  } catch (const EvalError& e) {
    throw EngineError("body failed in rule '" + rule.rule->name + "': " + e.what());
  }

  const std::size_t kept_count = rule.rule->kept.size();
  for (std::size_t pos = kept_count; pos < m->ids.size(); ++pos)
    next.store.erase(m->ids[pos]);
  for (auto it = body_values.rbegin(); it != body_values.rend(); ++it)
    next.query.emplace_front(*it);
  next.history.insert({rule.rule->name, m->ids});
  ev = TraceEvent{EventKind::Apply,      rule.rule->name, active.id, active.value,
                  active.pattern_index, std::move(m->ids), std::move(body_values)};
  return out;
}

RunResult run(const Program& p, const ValueList& goal, std::size_t max_steps) {
  EnumProgram ep = enumerate(p);
  RunResult out;
  out.final_state = initial_state(goal);
  for (;;) {
    std::optional<StepResult> r;
    try {
      r = step(ep, out.final_state);
    } catch (const EngineError& e) {
      out.status = RunStatus::BodyError;
      out.diagnostic = e.what();
      return out;
    }
    if (!r) {
      out.status = RunStatus::Terminated;
      return out;
    }
    if (out.trace.size() >= max_steps) {
      out.status = RunStatus::StepLimit;
      return out;
    }
    out.trace.push_back(std::move(r->event));
    out.final_state = std::move(r->state);
  }
}

RecordedRun run_recorded(const EnumProgram& p, const ValueList& goal,
                         std::size_t max_steps) {
  RecordedRun out;
  out.states.push_back(initial_state(goal));
  for (;;) {
    std::optional<StepResult> r;
    try {
      r = step(p, out.states.back());
    } catch (const EngineError& e) {
      out.status = RunStatus::BodyError;
      out.diagnostic = e.what();
      return out;
    }
    if (!r) {
      out.status = RunStatus::Terminated;
      return out;
    }
    if (out.trace.size() >= max_steps) {
      out.status = RunStatus::StepLimit;
      return out;
    }
    out.trace.push_back(std::move(r->event));
    out.states.push_back(std::move(r->state));
  }
}

}  // namespace freechr
