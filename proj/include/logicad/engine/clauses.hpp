#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include "logicad/fol/formula.hpp"
#include "logicad/fol/printer.hpp"

namespace logicad::engine {

using fol::Formula;
using fol::FormulaKind;

// Literal encoding: atom `i` is `i + 1`, its negation `-(i + 1)`.
using Literal = int;
using Clause = std::vector<Literal>;

inline int atom_of(Literal l) { return std::abs(l) - 1; }
inline Literal positive(int atom) { return atom + 1; }

// Dense table of ground atoms. Auxiliary (definitional) atoms are flagged so
// that models can be projected back onto the original vocabulary.
class AtomTable {
 public:
  int intern(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) {
      names_.push_back(name);
      aux_.push_back(false);
    }
    return it->second;
  }

  int fresh_aux() {
    const int id = static_cast<int>(names_.size());
    names_.push_back("$aux" + std::to_string(id));
    aux_.push_back(true);
    return id;
  }

  int find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  bool is_aux(int id) const { return aux_.at(static_cast<std::size_t>(id)); }

 private:
  std::vector<std::string> names_;
  std::vector<bool> aux_;
  std::unordered_map<std::string, int> index_;
};

struct ClauseSet {
  std::vector<Clause> clauses;
  AtomTable atoms;

  // Normalises `c` (sorted, duplicates removed) and appends it unless it is a
  // tautology. An empty clause makes the set unsatisfiable.
  void add(Clause c) {
    std::sort(c.begin(), c.end(), [](Literal a, Literal b) {
      return atom_of(a) != atom_of(b) ? atom_of(a) < atom_of(b) : a < b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i] == -c[i - 1]) return;
    }
    clauses.push_back(std::move(c));
  }
};

// Structural (Tseitin) clausification of ground, quantifier-free formulae.
// Sub-formulae below the top-level connective get a fresh atom constrained to
// be equivalent to them, so every model of the original atoms extends to
// exactly one model of the clause set.
class Clausifier {
 public:
  explicit Clausifier(ClauseSet& out) : out_(out) {}

  void assert_formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: return;
      case FormulaKind::False: out_.add({}); return;
      case FormulaKind::And:
        for (const auto& c : f.children()) assert_formula(c);
        return;
      case FormulaKind::Or: {
        Clause c;
        for (const auto& g : f.children()) c.push_back(literal(g));
        out_.add(std::move(c));
        return;
      }
      case FormulaKind::Implies: out_.add({-literal(f.child(0)), literal(f.child(1))}); return;
      case FormulaKind::Iff: {
        const Literal a = literal(f.child(0));
        const Literal b = literal(f.child(1));
        out_.add({-a, b});
        out_.add({a, -b});
        return;
      }
      case FormulaKind::Not: assert_negation(f.child()); return;
      default: out_.add({literal(f)}); return;
    }
  }

  // Literal equivalent to `f`, introducing definitions as needed.
  Literal literal(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom: return positive(out_.atoms.intern(fol::print_atom(f)));
      case FormulaKind::Not: return -literal(f.child());
      case FormulaKind::True:
      case FormulaKind::False: {
        if (truth_ == 0) {
          truth_ = positive(out_.atoms.fresh_aux());
          out_.add({truth_});
        }
        return f.is(FormulaKind::True) ? truth_ : -truth_;
      }
      default: break;
    }
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;

    const Literal t = positive(out_.atoms.fresh_aux());
    switch (f.kind()) {
      case FormulaKind::And: {
        Clause back{t};
        for (const auto& g : f.children()) {
          const Literal l = literal(g);
          out_.add({-t, l});
          back.push_back(-l);
        }
        out_.add(std::move(back));
        break;
      }
      case FormulaKind::Or: {
        Clause fwd{-t};
        for (const auto& g : f.children()) {
          const Literal l = literal(g);
          out_.add({t, -l});
          fwd.push_back(l);
        }
        out_.add(std::move(fwd));
        break;
      }
      case FormulaKind::Implies: {
        const Literal a = literal(f.child(0));
        const Literal b = literal(f.child(1));
        out_.add({-t, -a, b});
        out_.add({t, a});
        out_.add({t, -b});
        break;
      }
      case FormulaKind::Iff: {
        const Literal a = literal(f.child(0));
        const Literal b = literal(f.child(1));
        out_.add({-t, -a, b});
        out_.add({-t, a, -b});
        out_.add({t, a, b});
        out_.add({t, -a, -b});
        break;
      }
      default: throw std::invalid_argument("clausify: formula is not ground and quantifier-free: " + fol::print_formula(f));
    }
    memo_.emplace(f.id(), t);
    return t;
  }

 private:
  void assert_negation(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: out_.add({}); return;
      case FormulaKind::False: return;
      case FormulaKind::Not: assert_formula(f.child()); return;
      case FormulaKind::And: {
        Clause c;
        for (const auto& g : f.children()) c.push_back(-literal(g));
        out_.add(std::move(c));
        return;
      }
      case FormulaKind::Or:
        for (const auto& g : f.children()) assert_negation(g);
        return;
      case FormulaKind::Implies:
        assert_formula(f.child(0));
        assert_negation(f.child(1));
        return;
      case FormulaKind::Iff: {
        const Literal a = literal(f.child(0));
        const Literal b = literal(f.child(1));
        out_.add({a, b});
        out_.add({-a, -b});
        return;
      }
      default: out_.add({-literal(f)}); return;
    }
  }

  ClauseSet& out_;
  std::unordered_map<const void*, Literal> memo_;
  Literal truth_ = 0;
};

inline ClauseSet to_clauses(const std::vector<Formula>& ground_formulas) {
  ClauseSet cs;
  Clausifier clausifier(cs);
  for (const auto& f : ground_formulas) clausifier.assert_formula(f);
  return cs;
}

}  // namespace logicad::engine
