#pragma once

#include <exception>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "freechr/value.hpp"

namespace freechr {

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Eq, Ne, And, Or };

/// Operator spelling as accepted by the rule language.
const char* binary_op_text(BinaryOp op);

class Term;
using TermPtr = std::shared_ptr<const Term>;
using TermList = std::vector<TermPtr>;

/// An expression over the value domain. Terms are immutable trees; shared
/// subterms are fine. Variable names must match [A-Z][A-Za-z0-9_]*.
class Term {
public:
  struct Lit { Value value; };
  struct Var { std::string name; };
  struct Neg { TermPtr operand; };
  struct Not { TermPtr operand; };
  struct BinOp { BinaryOp op; TermPtr lhs; TermPtr rhs; };
  struct Tuple { TermList items; };
  using Node = std::variant<Lit, Var, Neg, Not, BinOp, Tuple>;

  static TermPtr lit(Value v);
  static TermPtr var(std::string name);  // throws std::invalid_argument on bad name
  static TermPtr neg(TermPtr operand);
  static TermPtr logical_not(TermPtr operand);
  static TermPtr binop(BinaryOp op, TermPtr lhs, TermPtr rhs);
  static TermPtr tuple(TermList items);  // arity >= 2

  const Node& node() const { return node_; }

  explicit Term(Node node) : node_(std::move(node)) {}

private:
  Node node_;
};

/// Structural equality.
bool term_equal(const Term& a, const Term& b);

/// Finite map from variable name to value; each name bound at most once.
using Substitution = std::map<std::string, Value>;

enum class EvalErrorKind { UnboundVar, TypeMismatch, DivByZero, Overflow };

class EvalError : public std::exception {
public:
  EvalError(EvalErrorKind kind, std::string message)
      : kind_(kind), message_(std::move(message)) {}
  EvalErrorKind kind() const { return kind_; }
  const char* what() const noexcept override { return message_.c_str(); }

private:
  EvalErrorKind kind_;
  std::string message_;
};

/// Bottom-up evaluation of a term under a substitution. Arithmetic is over
/// 64-bit integers with overflow reported as an error; and/or are strict over
/// booleans; = and != are total structural equality; < and =< order integers
/// only. Throws EvalError.
Value eval(const Term& t, const Substitution& s);

/// True iff eval yields boolean true; false iff boolean false; a non-boolean
/// result is a TypeMismatch.
bool equiv_true(const Term& t, const Substitution& s);

/// One-sided matching of a constructor pattern (Lit/Var/Tuple nodes only)
/// against a value, extending `s`. An already-bound variable must agree with
/// the value (nonlinear patterns). Returns nullopt on mismatch. Throws
/// std::logic_error if the pattern contains operator nodes.
std::optional<Substitution> match_pattern(const Term& pattern, const Value& v,
                                          Substitution s);

/// The set of variable names occurring in t.
std::set<std::string> free_vars(const Term& t);

/// True iff t consists of Lit/Var/Tuple nodes only.
bool is_pattern(const Term& t);

}  // namespace freechr
