#include "freechr/term.hpp"

#include <stdexcept>

namespace freechr {

namespace {

bool valid_var_name(const std::string& name) {
  if (name.empty() || name[0] < 'A' || name[0] > 'Z') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void type_mismatch(const char* op, const Value& v) {
  throw EvalError(EvalErrorKind::TypeMismatch,
                  std::string("operator ") + op + " not defined on " + v.show());
}

std::int64_t want_int(const char* op, const Value& v) {
  if (!v.is_int()) type_mismatch(op, v);
  return v.as_int();
}

bool want_bool(const char* op, const Value& v) {
  if (!v.is_bool()) type_mismatch(op, v);
  return v.as_bool();
}

Value eval_binop(BinaryOp op, const Value& a, const Value& b) {
  const char* text = binary_op_text(op);
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul: {
      std::int64_t x = want_int(text, a), y = want_int(text, b), r = 0;
      bool bad = op == BinaryOp::Add   ? __builtin_add_overflow(x, y, &r)
                 : op == BinaryOp::Sub ? __builtin_sub_overflow(x, y, &r)
                                       : __builtin_mul_overflow(x, y, &r);
      if (bad)
        throw EvalError(EvalErrorKind::Overflow, std::string("overflow in ") +
                                                     std::to_string(x) + " " + text +
                                                     " " + std::to_string(y));
      return Value::integer(r);
    }
    case BinaryOp::Div:
    case BinaryOp::Mod: {
      std::int64_t x = want_int(text, a), y = want_int(text, b);
      if (y == 0)
        throw EvalError(EvalErrorKind::DivByZero,
                        std::string(text) + " by zero on " + std::to_string(x));
      if (x == INT64_MIN && y == -1)
        throw EvalError(EvalErrorKind::Overflow, "overflow in INT64_MIN div -1");
      return Value::integer(op == BinaryOp::Div ? x / y : x % y);
    }
    case BinaryOp::Lt:
      return Value::boolean(want_int(text, a) < want_int(text, b));
    case BinaryOp::Le:
      return Value::boolean(want_int(text, a) <= want_int(text, b));
    case BinaryOp::Eq:
      return Value::boolean(a == b);
    case BinaryOp::Ne:
      return Value::boolean(!(a == b));
    case BinaryOp::And:
      return Value::boolean(want_bool(text, a) && want_bool(text, b));
    case BinaryOp::Or:
      return Value::boolean(want_bool(text, a) || want_bool(text, b));
  }
  throw std::logic_error("unreachable binary op");
}

}  // namespace

const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "div";
    case BinaryOp::Mod: return "mod";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "=<";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

TermPtr Term::lit(Value v) { return std::make_shared<Term>(Node(Lit{std::move(v)})); }

TermPtr Term::var(std::string name) {
  if (!valid_var_name(name))
    throw std::invalid_argument("invalid variable name: '" + name + "'");
  return std::make_shared<Term>(Node(Var{std::move(name)}));
}

TermPtr Term::neg(TermPtr operand) {
  return std::make_shared<Term>(Node(Neg{std::move(operand)}));
}

TermPtr Term::logical_not(TermPtr operand) {
  return std::make_shared<Term>(Node(Not{std::move(operand)}));
}

TermPtr Term::binop(BinaryOp op, TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Term>(Node(BinOp{op, std::move(lhs), std::move(rhs)}));
}

TermPtr Term::tuple(TermList items) {
  if (items.size() < 2)
    throw std::invalid_argument("tuple term arity must be >= 2");
  return std::make_shared<Term>(Node(Tuple{std::move(items)}));
}

bool term_equal(const Term& a, const Term& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Term::Lit>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, Term::Var>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, Term::Neg> ||
                             std::is_same_v<T, Term::Not>) {
          return term_equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, Term::BinOp>) {
          return na.op == nb.op && term_equal(*na.lhs, *nb.lhs) &&
                 term_equal(*na.rhs, *nb.rhs);
        } else {
          const auto& xs = na.items;
          const auto& ys = nb.items;
          if (xs.size() != ys.size()) return false;
          for (std::size_t i = 0; i < xs.size(); ++i)
            if (!term_equal(*xs[i], *ys[i])) return false;
          return true;
        }
      },
      a.node());
}

Value eval(const Term& t, const Substitution& s) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term::Lit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Term::Var>) {
          auto it = s.find(n.name);
          if (it == s.end())
            throw EvalError(EvalErrorKind::UnboundVar,
                            "unbound variable " + n.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Term::Neg>) {
          Value v = eval(*n.operand, s);
          std::int64_t x = want_int("-", v), r = 0;
          if (__builtin_sub_overflow(std::int64_t{0}, x, &r))
            throw EvalError(EvalErrorKind::Overflow, "overflow negating INT64_MIN");
          return Value::integer(r);
        } else if constexpr (std::is_same_v<T, Term::Not>) {
          return Value::boolean(!want_bool("not", eval(*n.operand, s)));
        } else if constexpr (std::is_same_v<T, Term::BinOp>) {
          // Strict: both operands are evaluated even for and/or.
          Value a = eval(*n.lhs, s);
          Value b = eval(*n.rhs, s);
          return eval_binop(n.op, a, b);
        } else {
          ValueList items;
          items.reserve(n.items.size());
          for (const auto& item : n.items) items.push_back(eval(*item, s));
          return Value::tuple(std::move(items));
        }
      },
      t.node());
}

bool equiv_true(const Term& t, const Substitution& s) {
  Value v = eval(t, s);
  if (!v.is_bool())
    throw EvalError(EvalErrorKind::TypeMismatch,
                    "expected a boolean, got " + v.show());
  return v.as_bool();
}

std::optional<Substitution> match_pattern(const Term& pattern, const Value& v,
                                          Substitution s) {
  return std::visit(
      [&](const auto& n) -> std::optional<Substitution> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term::Lit>) {
          if (n.value == v) return s;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Term::Var>) {
          auto it = s.find(n.name);
          if (it != s.end()) {
            if (it->second == v) return s;
            return std::nullopt;
          }
          s.emplace(n.name, v);
          return s;
        } else if constexpr (std::is_same_v<T, Term::Tuple>) {
          if (!v.is_tuple() || v.items().size() != n.items.size())
            return std::nullopt;
          std::optional<Substitution> acc = std::move(s);
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            acc = match_pattern(*n.items[i], v.items()[i], std::move(*acc));
            if (!acc) return std::nullopt;
          }
          return acc;
        } else {
          throw std::logic_error("match_pattern: operator node in head pattern");
        }
      },
      pattern.node());
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  auto walk = [&out](const Term& term, const auto& self) -> void {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Term::Var>) {
            out.insert(n.name);
          } else if constexpr (std::is_same_v<T, Term::Neg> ||
                               std::is_same_v<T, Term::Not>) {
            self(*n.operand, self);
          } else if constexpr (std::is_same_v<T, Term::BinOp>) {
            self(*n.lhs, self);
            self(*n.rhs, self);
          } else if constexpr (std::is_same_v<T, Term::Tuple>) {
            for (const auto& item : n.items) self(*item, self);
          }
        },
        term.node());
  };
  walk(t, walk);
  return out;
}

bool is_pattern(const Term& t) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term::Lit> || std::is_same_v<T, Term::Var>) {
          return true;
        } else if constexpr (std::is_same_v<T, Term::Tuple>) {
          for (const auto& item : n.items)
            if (!is_pattern(*item)) return false;
          return true;
        } else {
          return false;
        }
      },
      t.node());
}

}  // namespace freechr
