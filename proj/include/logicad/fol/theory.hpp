#pragma once

#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/formula.hpp"
#include "logicad/fol/printer.hpp"

namespace logicad::fol {

// Ordered list of closed formulae.
class Theory {
 public:
  Theory() = default;
  explicit Theory(std::vector<Formula> formulas) {
    for (auto& f : formulas) add(std::move(f));
  }

  void add(Formula f) {
    auto free = free_variables(f);
    if (!free.empty()) throw UnboundVariable({}, *free.begin());
    formulas_.push_back(std::move(f));
  }
  void append(const Theory& other) {
    formulas_.insert(formulas_.end(), other.formulas_.begin(), other.formulas_.end());
  }

  const std::vector<Formula>& formulas() const noexcept { return formulas_; }
  std::size_t size() const noexcept { return formulas_.size(); }
  bool empty() const noexcept { return formulas_.empty(); }
  auto begin() const { return formulas_.begin(); }
  auto end() const { return formulas_.end(); }

  friend bool operator==(const Theory&, const Theory&) = default;

 private:
  std::vector<Formula> formulas_;
};

// One formula per line, each terminated by `;`. Parses back to an equal theory.
inline std::string print_theory(const Theory& t) {
  std::string out;
  for (const auto& f : t) {
    out += print_formula(f);
    out += ";\n";
  }
  return out;
}

// Ground atoms describing one image. Duplicates are dropped on insertion,
// keeping the first occurrence.
class FactSet {
 public:
  FactSet() = default;
  explicit FactSet(const std::vector<Formula>& atoms) {
    for (const auto& a : atoms) add(a);
  }

  // Returns false when the atom was already present.
  bool add(const Formula& atom) {
    if (!is_ground_atom(atom)) throw SpecError("fact is not a ground atom: " + print_atom(atom));
    if (!seen_.insert(print_atom(atom)).second) return false;
    atoms_.push_back(atom);
    return true;
  }

  bool contains(const Formula& atom) const { return seen_.count(print_atom(atom)) > 0; }

  const std::vector<Formula>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  friend bool operator==(const FactSet& a, const FactSet& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Formula> atoms_;
  std::unordered_set<std::string> seen_;
};

// Interprets a parsed theory as a fact set; every member must be a ground atom.
inline FactSet to_fact_set(const Theory& t) {
  FactSet facts;
  for (const auto& f : t) facts.add(f);
  return facts;
}

inline Theory to_theory(const FactSet& facts) { return Theory(facts.atoms()); }

inline std::ostream& operator<<(std::ostream& os, const Theory& t) { return os << print_theory(t); }

inline std::ostream& operator<<(std::ostream& os, const FactSet& facts) {
  for (const auto& a : facts) os << print_atom(a) << "; ";
  return os;
}

}  // namespace logicad::fol
