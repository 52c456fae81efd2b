#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "logicad/error.hpp"

namespace logicad::fol {

enum class TermKind : std::uint8_t { Constant, Numeral, Irrel, Variable };

namespace detail {

inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_keyword(std::string_view s) { return s == "forall" || s == "exists" || s == "irrel"; }

}  // namespace detail

// [a-z][a-z0-9_]*, excluding keywords. Used for constants and predicates.
inline bool is_lower_identifier(std::string_view s) {
  if (s.empty() || !detail::is_lower(s.front()) || detail::is_keyword(s)) return false;
  for (char c : s) {
    if (!detail::is_lower(c) && !detail::is_digit(c) && c != '_') return false;
  }
  return true;
}

// [A-Z][A-Za-z0-9_]*
inline bool is_variable_identifier(std::string_view s) {
  if (s.empty() || !detail::is_upper(s.front())) return false;
  for (char c : s) {
    if (!detail::is_lower(c) && !detail::is_upper(c) && !detail::is_digit(c) && c != '_') return false;
  }
  return true;
}

// A flat first-order term. There are no function symbols, so a term is one of
// a named constant, a count, the `irrel` marker or a variable.
class Term {
 public:
  static Term constant(std::string name) {
    if (!is_lower_identifier(name)) throw InvalidName("invalid constant name '" + name + "'");
    return Term(TermKind::Constant, std::move(name), 0);
  }
  static Term numeral(std::uint64_t value) { return Term(TermKind::Numeral, {}, value); }
  static Term irrel() { return Term(TermKind::Irrel, {}, 0); }
  static Term variable(std::string name) {
    if (!is_variable_identifier(name)) throw InvalidName("invalid variable name '" + name + "'");
    return Term(TermKind::Variable, std::move(name), 0);
  }
  // Anonymous domain element `_pad<i>`; cannot collide with user constants.
  static Term padding(std::size_t index) {
    return Term(TermKind::Constant, "_pad" + std::to_string(index), 0);
  }

  TermKind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == TermKind::Constant; }
  bool is_numeral() const noexcept { return kind_ == TermKind::Numeral; }
  bool is_irrel() const noexcept { return kind_ == TermKind::Irrel; }
  bool is_variable() const noexcept { return kind_ == TermKind::Variable; }
  bool is_ground() const noexcept { return kind_ != TermKind::Variable; }

  const std::string& name() const noexcept { return name_; }
  std::uint64_t value() const noexcept { return value_; }

  std::string str() const {
    switch (kind_) {
      case TermKind::Numeral: return std::to_string(value_);
      case TermKind::Irrel: return "irrel";
      default: return name_;
    }
  }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string name, std::uint64_t value) : kind_(kind), name_(std::move(name)), value_(value) {}

  TermKind kind_;
  std::string name_;
  std::uint64_t value_;
};

}  // namespace logicad::fol
