#include "freechr/classic.hpp"

#include <sstream>

namespace freechr {

std::optional<std::string> validate_classic_rule(const ClassicRule& rule) {
  if (rule.name.empty()) return "rule name is empty";
  if (rule.kept.empty() && rule.removed.empty())
    return "rule '" + rule.name + "' has neither kept nor removed heads";
  std::set<std::string> head_vars;
  for (std::size_t a = 0; a < rule.head_count(); ++a) {
    const Term& h = rule.head_at(a);
    if (!is_pattern(h))
      return "rule '" + rule.name + "': head " + std::to_string(a + 1) +
             " is not a constructor pattern";
    auto vs = free_vars(h);
    head_vars.insert(vs.begin(), vs.end());
  }
  auto check_bound = [&](const Term& t, const char* where) -> std::optional<std::string> {
    for (const auto& v : free_vars(t))
      if (!head_vars.count(v))
        return "rule '" + rule.name + "': variable " + v + " in the " + where +
               " is not bound by the heads";
    return std::nullopt;
  };
  if (rule.guard)
    if (auto err = check_bound(*rule.guard, "guard")) return err;
  for (const auto& b : rule.body)
    if (auto err = check_bound(*b, "body")) return err;
  return std::nullopt;
}

std::set<int> EnumClassicRule::labels() const {
  std::set<int> out(kept_indices.begin(), kept_indices.end());
  out.insert(removed_indices.begin(), removed_indices.end());
  return out;
}

std::vector<EnumClassicRule> enum_classic(const std::vector<ClassicRule>& rules) {
  std::vector<EnumClassicRule> out;
  int next = 1;
  for (const auto& rule : rules) {
    EnumClassicRule er;
    er.rule = rule;
    er.removed_indices.resize(rule.removed.size());
    for (std::size_t i = rule.removed.size(); i-- > 0;) er.removed_indices[i] = next++;
    er.kept_indices.resize(rule.kept.size());
    for (std::size_t i = rule.kept.size(); i-- > 0;) er.kept_indices[i] = next++;
    out.push_back(std::move(er));
  }
  return out;
}

std::set<int> labels_classic(const std::vector<EnumClassicRule>& rules) {
  std::set<int> out;
  for (const auto& r : rules) {
    auto ls = r.labels();
    out.insert(ls.begin(), ls.end());
  }
  return out;
}

std::optional<CInstance> ground_instance(const ClassicRule& rule,
                                         const ValueList& values) {
  Substitution subst;
  for (std::size_t a = 0; a < rule.head_count(); ++a) {
    auto next = match_pattern(rule.head_at(a), values[a], std::move(subst));
    if (!next) return std::nullopt;
    subst = std::move(*next);
  }
  CInstance inst;
  inst.name = rule.name;
  inst.kept_values.assign(values.begin(), values.begin() + rule.kept.size());
  inst.removed_values.assign(values.begin() + rule.kept.size(), values.end());
  inst.guard_holds = rule.guard ? equiv_true(*rule.guard, subst) : true;
  if (inst.guard_holds)
    for (const auto& b : rule.body) inst.body_values.push_back(eval(*b, subst));
  return inst;
}

std::vector<EmbeddedRule> theta_embed(const EnumProgram& p) {
  std::vector<EmbeddedRule> out;
  for (const auto& ir : p.rules()) {
    const auto rule = ir.rule;
    EmbeddedRule er;
    er.name = rule->name;
    er.kept_count = rule->kept.size();
    er.removed_count = rule->removed.size();
    for (std::size_t a = 0; a < ir.head_count(); ++a)
      er.indices.push_back(ir.index_at(a));
    er.combined_guard = [rule](const ValueList& values) -> bool {
      for (std::size_t a = 0; a < rule->head_count(); ++a)
        if (!rule->head_at(a).test(values[a])) return false;
      return rule->guard(values);
    };
    er.body = rule->body;

    std::ostringstream guard_text;
    for (std::size_t a = 0; a < rule->head_count(); ++a)
      guard_text << rule->head_at(a).descriptor << " and ";
    guard_text << rule->guard_descriptor;
    er.guard_descriptor = guard_text.str();
    er.body_descriptor = rule->body_descriptor;
    out.push_back(std::move(er));
  }
  return out;
}

std::string embed_dump(const std::vector<EmbeddedRule>& rules) {
  std::ostringstream out;
  for (const auto& r : rules) {
    out << r.name << " @ ";
    for (std::size_t i = 0; i < r.kept_count; ++i) out << (i ? " " : "") << "#" << r.indices[i];
    out << " \\ ";
    for (std::size_t i = 0; i < r.removed_count; ++i)
      out << (i ? " " : "") << "#" << r.indices[r.kept_count + i];
    out << " <=> " << r.guard_descriptor << " | " << r.body_descriptor << "\n";
  }
  return out.str();
}

namespace {

// Same search as find_matching, but acceptance is decided wholesale by the
// combined guard: every complete id assignment is visited in the same order,
// so both engines commit to the same first matching.
std::optional<Matching> find_matching_classic(const EmbeddedRule& rule,
                                              std::uint64_t active_id,
                                              const Value& active_value,
                                              std::size_t active_pos,
                                              const RefinedState& state) {
  const std::size_t head_count = rule.head_count();
  if (state.store.find(active_id) == state.store.end()) return std::nullopt;

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

  auto fill = [&](std::size_t pos, const auto& self) -> bool {
    if (pos == head_count) {
      if (!rule.combined_guard(m.values)) return false;
      if (state.history.count({rule.name, m.ids})) return false;
      return true;
    }
    if (pos == active_pos) return self(pos + 1, self);
    for (const auto& [id, value] : state.store) {
      if (id_used(id, pos)) continue;
      m.ids[pos] = id;
      m.values[pos] = value;
      if (self(pos + 1, self)) return true;
    }
    return false;
  };
  if (fill(0, fill)) return m;
  return std::nullopt;
}

}  // namespace

std::optional<StepResult> step_classic(const std::vector<EmbeddedRule>& rules,
                                       const RefinedState& s) {
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
  const EmbeddedRule* selected = nullptr;
  std::size_t active_pos = 0;
  for (const auto& rule : rules) {
    for (std::size_t a = 0; a < rule.indices.size(); ++a) {
      if (rule.indices[a] == active.pattern_index) {
        selected = &rule;
        active_pos = a;
        break;
      }
    }
    if (selected) break;
  }

  if (!selected) {
    next.query.pop_front();
    ev = TraceEvent{EventKind::Drop, std::nullopt, active.id,
                    active.value,    active.pattern_index, {}, {}};
    return out;
  }

  std::optional<Matching> m;
  try {
    m = find_matching_classic(*selected, active.id, active.value, active_pos, s);
  } catch (const EvalError& e) {
    throw EngineError("guard failed in rule '" + selected->name + "': " + e.what());
  }

  if (!m) {
    std::get<ActiveItem>(next.query.front()).pattern_index += 1;
    ev = TraceEvent{EventKind::Default, selected->name, active.id,
                    active.value,       active.pattern_index, {}, {}};
    return out;
  }

  ValueList body_values;
  try {
    body_values = selected->body(m->values);
  } catch (const EvalError& e) {
    throw EngineError("body failed in rule '" + selected->name + "': " + e.what());
  }

  for (std::size_t pos = selected->kept_count; pos < m->ids.size(); ++pos)
    next.store.erase(m->ids[pos]);
  for (auto it = body_values.rbegin(); it != body_values.rend(); ++it)
    next.query.emplace_front(*it);
  next.history.insert({selected->name, m->ids});
  ev = TraceEvent{EventKind::Apply,      selected->name,    active.id, active.value,
                  active.pattern_index, std::move(m->ids), std::move(body_values)};
  return out;
}

EquivalenceReport check_equivalence(const Program& p, const ValueList& goal,
                                    std::size_t max_steps) {
  EnumProgram ep = enumerate(p);
  std::vector<EmbeddedRule> embedded = theta_embed(ep);

  EquivalenceReport report;
  RefinedState refined_state = initial_state(goal);
  RefinedState classic_state = refined_state;

  for (;;) {
    std::optional<StepResult> r1, r2;
    std::optional<std::string> err1, err2;
    try {
      r1 = step(ep, refined_state);
    } catch (const EngineError& e) {
      err1 = e.what();
    }
    try {
      r2 = step_classic(embedded, classic_state);
    } catch (const EngineError& e) {
      err2 = e.what();
    }

    if (err1 || err2) {
      // Both engines share the guard and body functions, so an execution
      // error is equivalent behavior only if both hit it at the same step.
      if (err1 == err2) return report;
      report.divergence = Divergence{
          report.steps, "only one engine failed: refined=" + err1.value_or("ok") +
                            " classic=" + err2.value_or("ok")};
      return report;
    }
    if (!r1 || !r2) {
      if (!r1 && !r2) return report;  // both terminal
      report.divergence =
          Divergence{report.steps, std::string(!r1 ? "refined" : "classic") +
                                       " engine terminated first"};
      return report;
    }
    if (!(r1->event == r2->event)) {
      report.divergence =
          Divergence{report.steps, "events differ: refined=" + r1->event.show() +
                                       " classic=" + r2->event.show()};
      return report;
    }
    if (!(r1->state == r2->state)) {
      report.divergence =
          Divergence{report.steps, "states differ: refined=" + r1->state.show() +
                                       " classic=" + r2->state.show()};
      return report;
    }
    refined_state = std::move(r1->state);
    classic_state = std::move(r2->state);
    ++report.steps;
    if (report.steps >= max_steps) {
      report.step_limit = true;
      return report;
    }
  }
}

}  // namespace freechr
