#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace freechr {

class Value;
using ValueList = std::vector<Value>;

/// A ground element of the constraint domain: a signed 64-bit integer, a
/// boolean, an interned symbol or a tuple of at least two values. Values are
/// immutable and compared structurally.
class Value {
public:
  enum class Kind { Int, Bool, Sym, Tuple };

  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  /// Symbol names must match [a-z][A-Za-z0-9_]*; throws std::invalid_argument.
  static Value symbol(std::string name);
  /// Tuples need arity >= 2; throws std::invalid_argument otherwise.
  static Value tuple(ValueList items);

  Kind kind() const;
  bool is_int() const { return kind() == Kind::Int; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_sym() const { return kind() == Kind::Sym; }
  bool is_tuple() const { return kind() == Kind::Tuple; }

  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& sym_name() const;
  const ValueList& items() const;

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  /// Total order (by kind, then content); used for canonical multisets.
  bool operator<(const Value& other) const;

  /// Human form: 6, true, a, (a,b).
  std::string show() const;
  /// Tagged wire form: int:6, bool:true, sym:a, tuple:[sym:a,sym:b].
  std::string render() const;

private:
  using Rep = std::variant<std::int64_t, bool, std::string, ValueList>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

bool valid_symbol_name(const std::string& name);

}  // namespace freechr
