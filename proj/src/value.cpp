#include "freechr/value.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace freechr {

bool valid_symbol_name(const std::string& name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

Value Value::integer(std::int64_t v) { return Value(Rep(std::in_place_index<0>, v)); }

Value Value::boolean(bool v) { return Value(Rep(std::in_place_index<1>, v)); }

Value Value::symbol(std::string name) {
  if (!valid_symbol_name(name))
    throw std::invalid_argument("invalid symbol name: '" + name + "'");
  return Value(Rep(std::in_place_index<2>, std::move(name)));
}

Value Value::tuple(ValueList items) {
  if (items.size() < 2)
    throw std::invalid_argument("tuple arity must be >= 2, got " +
                                std::to_string(items.size()));
  return Value(Rep(std::in_place_index<3>, std::move(items)));
}

Value::Kind Value::kind() const { return static_cast<Kind>(rep_.index()); }

std::int64_t Value::as_int() const { return std::get<0>(rep_); }
bool Value::as_bool() const { return std::get<1>(rep_); }
const std::string& Value::sym_name() const { return std::get<2>(rep_); }
const ValueList& Value::items() const { return std::get<3>(rep_); }

bool Value::operator==(const Value& other) const { return rep_ == other.rep_; }

bool Value::operator<(const Value& other) const {
  if (rep_.index() != other.rep_.index()) return rep_.index() < other.rep_.index();
  switch (kind()) {
    case Kind::Int: return as_int() < other.as_int();
    case Kind::Bool: return as_bool() < other.as_bool();
    case Kind::Sym: return sym_name() < other.sym_name();
    case Kind::Tuple: return items() < other.items();
  }
  return false;
}

std::string Value::show() const {
  switch (kind()) {
    case Kind::Int: return std::to_string(as_int());
    case Kind::Bool: return as_bool() ? "true" : "false";
    case Kind::Sym: return sym_name();
    case Kind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < items().size(); ++i) {
        if (i > 0) out += ",";
        out += items()[i].show();
      }
      return out + ")";
    }
  }
  return {};
}

std::string Value::render() const {
  switch (kind()) {
    case Kind::Int: return "int:" + std::to_string(as_int());
    case Kind::Bool: return as_bool() ? "bool:true" : "bool:false";
    case Kind::Sym: return "sym:" + sym_name();
    case Kind::Tuple: {
      std::string out = "tuple:[";
      for (std::size_t i = 0; i < items().size(); ++i) {
        if (i > 0) out += ",";
        out += items()[i].render();
      }
      return out + "]";
    }
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.show(); }

}  // namespace freechr
