#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::engine {

using fol::FactSet;
using fol::Formula;
using fol::Term;
using fol::Theory;

// Finite domain the quantifiers range over: every mentioned constant and
// numeral plus `padding` anonymous elements `_pad0.._padN-1`.
class Universe {
 public:
  Universe(std::set<std::string> constants, std::set<std::uint64_t> numerals, std::size_t padding, bool has_irrel = false)
      : constants_(std::move(constants)), numerals_(std::move(numerals)), padding_(padding), has_irrel_(has_irrel) {
    for (const auto& c : constants_) {
      if (c.rfind("_pad", 0) == 0) throw InvalidName("constant name clashes with padding element: " + c);
      elements_.push_back(Term::constant(c));
    }
    for (auto n : numerals_) elements_.push_back(Term::numeral(n));
    if (has_irrel_) elements_.push_back(Term::irrel());
    for (std::size_t i = 0; i < padding_; ++i) elements_.push_back(Term::padding(i));
    if (elements_.empty()) throw EmptyUniverse("universe is empty: no constants, no numerals and padding = 0");
  }

  const std::set<std::string>& constants() const noexcept { return constants_; }
  const std::set<std::uint64_t>& numerals() const noexcept { return numerals_; }
  std::size_t padding() const noexcept { return padding_; }

  // Constants (sorted), then numerals (ascending), then padding elements.
  const std::vector<Term>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  friend bool operator==(const Universe& a, const Universe& b) { return a.elements_ == b.elements_; }

 private:
  std::set<std::string> constants_;
  std::set<std::uint64_t> numerals_;
  std::size_t padding_;
  bool has_irrel_;
  std::vector<Term> elements_;
};

inline Universe collect_universe(const Theory& gamma, const FactSet& facts, std::size_t padding) {
  std::set<Term> terms;
  for (const auto& f : gamma) fol::collect_ground_terms(f, terms);
  for (const auto& f : facts) fol::collect_ground_terms(f, terms);
  std::set<std::string> constants;
  std::set<std::uint64_t> numerals;
  bool irrel = false;
  for (const auto& t : terms) {
    if (t.is_constant()) constants.insert(t.name());
    if (t.is_numeral()) numerals.insert(t.value());
    if (t.is_irrel()) irrel = true;
  }
  return Universe(std::move(constants), std::move(numerals), padding, irrel);
}

}  // namespace logicad::engine
