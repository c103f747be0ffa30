#pragma once

#include <exception>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "freechr/value.hpp"

namespace freechr {

/// A unary test over values, used as one head pattern of a rule. `test` must
/// be pure and total; the descriptor keeps dumps and traces readable.
struct HeadPredicate {
  std::function<bool(const Value&)> test;
  std::string descriptor;
};

/// One rewriting rule: matched values whose head position is in `kept` stay
/// in the store, those in `removed` are deleted, and the body produces the
/// newly queried values. Guard and body are always called with exactly
/// kept.size()+removed.size() values in head order (kept left-to-right, then
/// removed left-to-right) and must be pure; they may throw EvalError, which
/// aborts execution.
struct FreeRule {
  std::string name;
  std::vector<HeadPredicate> kept;
  std::vector<HeadPredicate> removed;
  std::function<bool(const ValueList&)> guard;
  std::function<ValueList(const ValueList&)> body;
  std::string guard_descriptor = "<guard>";
  std::string body_descriptor = "<body>";

  std::size_t head_count() const { return kept.size() + removed.size(); }
  /// Predicate at position a of the combined head (kept then removed).
  const HeadPredicate& head_at(std::size_t a) const {
    return a < kept.size() ? kept[a] : removed[a - kept.size()];
  }
};

enum class BuildErrorKind { EmptyHeads, EmptyName, DuplicateRuleName };

class BuildError : public std::exception {
public:
  BuildError(BuildErrorKind kind, std::string message)
      : kind_(kind), message_(std::move(message)) {}
  BuildErrorKind kind() const { return kind_; }
  const char* what() const noexcept override { return message_.c_str(); }

private:
  BuildErrorKind kind_;
  std::string message_;
};

/// Validated rule constructor. Throws BuildError on an empty name or when
/// both head lists are empty.
FreeRule make_rule(std::string name, std::vector<HeadPredicate> kept,
                   std::vector<HeadPredicate> removed,
                   std::function<bool(const ValueList&)> guard,
                   std::function<ValueList(const ValueList&)> body,
                   std::string guard_descriptor = "<guard>",
                   std::string body_descriptor = "<body>");

/// A program is a binary composition tree over rules. Rule names are unique
/// across the whole tree; all semantics treat the tree as its flattened
/// left-to-right rule sequence. Programs are immutable and cheap to copy.
class Program {
public:
  struct ComposeNode;
  using Node = std::variant<std::shared_ptr<const FreeRule>,
                            std::shared_ptr<const ComposeNode>>;
  struct ComposeNode {
    Program left;
    Program right;
  };

  /* implicit */ Program(FreeRule rule);
  explicit Program(std::shared_ptr<const FreeRule> rule);

  const Node& node() const { return node_; }

  /// Rules in left-to-right textual order.
  std::vector<std::shared_ptr<const FreeRule>> rules() const;

  /// All rule names, in textual order.
  std::vector<std::string> rule_names() const;

private:
  friend Program compose(Program lhs, Program rhs);
  explicit Program(Node node) : node_(std::move(node)) {}
  Node node_;
};

/// Composition of two programs. Re-validates rule-name uniqueness; throws
/// BuildError{DuplicateRuleName}.
Program compose(Program lhs, Program rhs);

/// Structural fold: rules are visited in left-to-right textual order.
template <typename R>
R fold_program(const Program& p, const std::function<R(const FreeRule&)>& on_rule,
               const std::function<R(R, R)>& on_compose) {
  if (auto rule = std::get_if<std::shared_ptr<const FreeRule>>(&p.node()))
    return on_rule(**rule);
  const auto& c = *std::get<std::shared_ptr<const Program::ComposeNode>>(p.node());
  R left = fold_program<R>(c.left, on_rule, on_compose);
  R right = fold_program<R>(c.right, on_rule, on_compose);
  return on_compose(std::move(left), std::move(right));
}

/// A rule whose head patterns carry pattern indices. Indices are global,
/// 1-based and contiguous across the program: within a rule the rightmost
/// removed head has the smallest index and indices grow right-to-left through
/// removed then kept; composition threads the counter left to right.
struct IndexedRule {
  std::shared_ptr<const FreeRule> rule;
  std::vector<int> kept_indices;
  std::vector<int> removed_indices;

  std::size_t head_count() const { return rule->head_count(); }
  /// Index of head position a (head order: kept then removed).
  int index_at(std::size_t a) const {
    return a < kept_indices.size() ? kept_indices[a]
                                   : removed_indices[a - kept_indices.size()];
  }
  std::set<int> labels() const;
};

/// The enumerated form of a program. Keeps the composition tree (so the
/// decoration can be undone exactly) plus the flattened rule sequence that
/// the executors traverse.
class EnumProgram {
public:
  struct TreeNode;
  using Tree = std::variant<IndexedRule, std::shared_ptr<const TreeNode>>;
  struct TreeNode {
    Tree left;
    Tree right;
  };

  const std::vector<IndexedRule>& rules() const { return rules_; }
  const Tree& tree() const { return tree_; }

  std::set<int> labels() const;
  /// Total number of head patterns (labels run 1..head count).
  int head_count() const { return total_heads_; }

  struct LabelLookup {
    const IndexedRule* rule;
    bool in_kept;
    std::size_t list_pos;  // 0-based position within kept or removed
    std::size_t head_pos;  // 0-based position a within the combined head
  };
  /// The unique rule containing pattern index l, or nullopt.
  std::optional<LabelLookup> rule_for_label(int l) const;

  const IndexedRule* find_rule(const std::string& name) const;

private:
  friend EnumProgram enumerate(const Program& p);
  EnumProgram(Tree tree, std::vector<IndexedRule> rules, int total_heads)
      : tree_(std::move(tree)), rules_(std::move(rules)), total_heads_(total_heads) {}
  Tree tree_;
  std::vector<IndexedRule> rules_;
  int total_heads_;
};

/// Decorates every head pattern with its pattern index.
EnumProgram enumerate(const Program& p);

/// Strips the decoration; unenumerate(enumerate(p)) reproduces p exactly
/// (same tree shape, same shared rules).
Program unenumerate(const EnumProgram& p);

/// Structural program equality: same composition shape and, per leaf, the
/// identical shared rule (or an equal name/arity/descriptor signature).
bool program_equal(const Program& a, const Program& b);

/// One line per rule: `name @ kept[desc#idx ...] \ removed[desc#idx ...]`.
std::string enumerate_dump(const EnumProgram& p);

}  // namespace freechr
