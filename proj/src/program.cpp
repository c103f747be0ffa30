#include "freechr/program.hpp"

#include <optional>
#include <sstream>

namespace freechr {

FreeRule make_rule(std::string name, std::vector<HeadPredicate> kept,
                   std::vector<HeadPredicate> removed,
                   std::function<bool(const ValueList&)> guard,
                   std::function<ValueList(const ValueList&)> body,
                   std::string guard_descriptor, std::string body_descriptor) {
  if (name.empty()) throw BuildError(BuildErrorKind::EmptyName, "rule name is empty");
  if (kept.empty() && removed.empty())
    throw BuildError(BuildErrorKind::EmptyHeads,
                     "rule '" + name + "' has neither kept nor removed heads");
  FreeRule r;
  r.name = std::move(name);
  r.kept = std::move(kept);
  r.removed = std::move(removed);
  r.guard = std::move(guard);
  r.body = std::move(body);
  r.guard_descriptor = std::move(guard_descriptor);
  r.body_descriptor = std::move(body_descriptor);
  return r;
}

Program::Program(FreeRule rule)
    : node_(std::make_shared<const FreeRule>(std::move(rule))) {}

Program::Program(std::shared_ptr<const FreeRule> rule) : node_(std::move(rule)) {}

std::vector<std::shared_ptr<const FreeRule>> Program::rules() const {
  std::vector<std::shared_ptr<const FreeRule>> out;
  auto walk = [&out](const Program& p, const auto& self) -> void {
    if (auto rule = std::get_if<std::shared_ptr<const FreeRule>>(&p.node())) {
      out.push_back(*rule);
      return;
    }
    const auto& c = *std::get<std::shared_ptr<const ComposeNode>>(p.node());
    self(c.left, self);
    self(c.right, self);
  };
  walk(*this, walk);
  return out;
}

std::vector<std::string> Program::rule_names() const {
  std::vector<std::string> names;
  for (const auto& r : rules()) names.push_back(r->name);
  return names;
}

Program compose(Program lhs, Program rhs) {
  std::set<std::string> seen;
  for (const auto& name : lhs.rule_names()) seen.insert(name);
  for (const auto& name : rhs.rule_names()) {
    if (!seen.insert(name).second)
      throw BuildError(BuildErrorKind::DuplicateRuleName,
                       "duplicate rule name '" + name + "'");
  }
  auto node = std::make_shared<const Program::ComposeNode>(
      Program::ComposeNode{std::move(lhs), std::move(rhs)});
  return Program(Program::Node(std::move(node)));
}

std::set<int> IndexedRule::labels() const {
  std::set<int> out(kept_indices.begin(), kept_indices.end());
  out.insert(removed_indices.begin(), removed_indices.end());
  return out;
}

std::set<int> EnumProgram::labels() const {
  std::set<int> out;
  for (const auto& r : rules_) {
    auto ls = r.labels();
    out.insert(ls.begin(), ls.end());
  }
  return out;
}

std::optional<EnumProgram::LabelLookup> EnumProgram::rule_for_label(int l) const {
  for (const auto& r : rules_) {
    for (std::size_t i = 0; i < r.kept_indices.size(); ++i)
      if (r.kept_indices[i] == l) return LabelLookup{&r, true, i, i};
    for (std::size_t i = 0; i < r.removed_indices.size(); ++i)
      if (r.removed_indices[i] == l)
        return LabelLookup{&r, false, i, r.kept_indices.size() + i};
  }
  return std::nullopt;
}

const IndexedRule* EnumProgram::find_rule(const std::string& name) const {
  for (const auto& r : rules_)
    if (r.rule->name == name) return &r;
  return nullptr;
}

namespace {

// Assigns indices to one rule: removed right-to-left from `next`, then kept
// right-to-left. Returns the first index after the rule.
IndexedRule index_rule(const std::shared_ptr<const FreeRule>& rule, int& next) {
  IndexedRule out;
  out.rule = rule;
  out.removed_indices.resize(rule->removed.size());
  for (std::size_t i = rule->removed.size(); i-- > 0;)
    out.removed_indices[i] = next++;
  out.kept_indices.resize(rule->kept.size());
  for (std::size_t i = rule->kept.size(); i-- > 0;) out.kept_indices[i] = next++;
  return out;
}

EnumProgram::Tree enumerate_tree(const Program& p, int& next,
                                 std::vector<IndexedRule>& rules) {
  if (auto rule = std::get_if<std::shared_ptr<const FreeRule>>(&p.node())) {
    IndexedRule ir = index_rule(*rule, next);
    rules.push_back(ir);
    return EnumProgram::Tree(std::move(ir));
  }
  const auto& c = *std::get<std::shared_ptr<const Program::ComposeNode>>(p.node());
  auto left = enumerate_tree(c.left, next, rules);
  auto right = enumerate_tree(c.right, next, rules);
  return EnumProgram::Tree(std::make_shared<const EnumProgram::TreeNode>(
      EnumProgram::TreeNode{std::move(left), std::move(right)}));
}

Program unenumerate_tree(const EnumProgram::Tree& t) {
  if (auto rule = std::get_if<IndexedRule>(&t)) return Program(rule->rule);
  const auto& n = *std::get<std::shared_ptr<const EnumProgram::TreeNode>>(t);
  return compose(unenumerate_tree(n.left), unenumerate_tree(n.right));
}

}  // namespace

EnumProgram enumerate(const Program& p) {
  int next = 1;
  std::vector<IndexedRule> rules;
  auto tree = enumerate_tree(p, next, rules);
  return EnumProgram(std::move(tree), std::move(rules), next - 1);
}

Program unenumerate(const EnumProgram& p) { return unenumerate_tree(p.tree()); }

namespace {

bool rules_equal(const std::shared_ptr<const FreeRule>& a,
                 const std::shared_ptr<const FreeRule>& b) {
  if (a == b) return true;
  if (a->name != b->name || a->kept.size() != b->kept.size() ||
      a->removed.size() != b->removed.size())
    return false;
  for (std::size_t i = 0; i < a->kept.size(); ++i)
    if (a->kept[i].descriptor != b->kept[i].descriptor) return false;
  for (std::size_t i = 0; i < a->removed.size(); ++i)
    if (a->removed[i].descriptor != b->removed[i].descriptor) return false;
  return a->guard_descriptor == b->guard_descriptor &&
         a->body_descriptor == b->body_descriptor;
}

}  // namespace

bool program_equal(const Program& a, const Program& b) {
  if (a.node().index() != b.node().index()) return false;
  if (auto rule = std::get_if<std::shared_ptr<const FreeRule>>(&a.node()))
    return rules_equal(*rule, std::get<std::shared_ptr<const FreeRule>>(b.node()));
  const auto& ca = *std::get<std::shared_ptr<const Program::ComposeNode>>(a.node());
  const auto& cb = *std::get<std::shared_ptr<const Program::ComposeNode>>(b.node());
  return program_equal(ca.left, cb.left) && program_equal(ca.right, cb.right);
}

std::string enumerate_dump(const EnumProgram& p) {
  std::ostringstream out;
  for (const auto& r : p.rules()) {
    out << r.rule->name << " @ kept[";
    for (std::size_t i = 0; i < r.rule->kept.size(); ++i) {
      if (i > 0) out << " ";
      out << r.rule->kept[i].descriptor << "#" << r.kept_indices[i];
    }
    out << "] \\ removed[";
    for (std::size_t i = 0; i < r.rule->removed.size(); ++i) {
      if (i > 0) out << " ";
      out << r.rule->removed[i].descriptor << "#" << r.removed_indices[i];
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace freechr
