#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/term.hpp"

namespace logicad::fol {

enum class FormulaKind : std::uint8_t { True, False, Atom, Eq, Not, And, Or, Implies, Iff, ForAll, Exists };

// Immutable first-order formula. Nodes are shared, so copies are cheap and a
// Formula can be handed to other threads freely.
//
// And/Or are n-ary (at least two operands); Implies/Iff are binary. True and
// False only show up as the result of grounding and simplification, never
// from the parser.
class Formula {
 public:
  struct Node {
    FormulaKind kind;
    std::string predicate;          // Atom
    std::vector<Term> args;         // Atom (any arity >= 1), Eq (exactly 2)
    std::vector<Formula> children;  // Not (1), And/Or (>= 2), Implies/Iff (2), quantifiers (1)
    std::string variable;           // ForAll/Exists
  };

  static Formula truth() { return make({FormulaKind::True, {}, {}, {}, {}}); }
  static Formula falsity() { return make({FormulaKind::False, {}, {}, {}, {}}); }

  static Formula atom(std::string predicate, std::vector<Term> args) {
    if (!is_lower_identifier(predicate)) throw InvalidName("invalid predicate name '" + predicate + "'");
    if (args.empty()) throw ArityError("predicate '" + predicate + "' needs at least one argument");
    return make({FormulaKind::Atom, std::move(predicate), std::move(args), {}, {}});
  }
  static Formula eq(Term lhs, Term rhs) { return make({FormulaKind::Eq, {}, {std::move(lhs), std::move(rhs)}, {}, {}}); }
  static Formula neq(Term lhs, Term rhs) { return negation(eq(std::move(lhs), std::move(rhs))); }
  static Formula negation(Formula f) { return make({FormulaKind::Not, {}, {}, {std::move(f)}, {}}); }

  // Conjunction/disjunction of `fs`. One operand yields the operand itself and
  // zero operands yield the neutral element.
  static Formula conjunction(std::vector<Formula> fs) { return nary(FormulaKind::And, std::move(fs)); }
  static Formula disjunction(std::vector<Formula> fs) { return nary(FormulaKind::Or, std::move(fs)); }
  static Formula implication(Formula lhs, Formula rhs) {
    return make({FormulaKind::Implies, {}, {}, {std::move(lhs), std::move(rhs)}, {}});
  }
  static Formula equivalence(Formula lhs, Formula rhs) {
    return make({FormulaKind::Iff, {}, {}, {std::move(lhs), std::move(rhs)}, {}});
  }
  static Formula forall(std::string var, Formula body) { return quantifier(FormulaKind::ForAll, std::move(var), std::move(body)); }
  static Formula exists(std::string var, Formula body) { return quantifier(FormulaKind::Exists, std::move(var), std::move(body)); }

  FormulaKind kind() const noexcept { return node_->kind; }
  bool is(FormulaKind k) const noexcept { return node_->kind == k; }
  bool is_atom() const noexcept { return node_->kind == FormulaKind::Atom; }
  bool is_quantifier() const noexcept { return is(FormulaKind::ForAll) || is(FormulaKind::Exists); }
  bool is_constant() const noexcept { return is(FormulaKind::True) || is(FormulaKind::False); }

  const std::string& predicate() const noexcept { return node_->predicate; }
  const std::vector<Term>& args() const noexcept { return node_->args; }
  const std::vector<Formula>& children() const noexcept { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const std::string& variable() const noexcept { return node_->variable; }

  // Identity of the shared node; equal ids imply structural equality.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.predicate == y.predicate && x.args == y.args && x.variable == y.variable &&
           x.children == y.children;
  }

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula make(Node node) { return Formula(std::make_shared<const Node>(std::move(node))); }

  static Formula nary(FormulaKind kind, std::vector<Formula> fs) {
    if (fs.empty()) return kind == FormulaKind::And ? truth() : falsity();
    if (fs.size() == 1) return std::move(fs.front());
    return make({kind, {}, {}, std::move(fs), {}});
  }

  static Formula quantifier(FormulaKind kind, std::string var, Formula body) {
    if (!is_variable_identifier(var)) throw InvalidName("invalid variable name '" + var + "'");
    return make({kind, {}, {}, {std::move(body)}, std::move(var)});
  }

  std::shared_ptr<const Node> node_;
};

// Pre-order visit of every sub-formula.
inline void visit(const Formula& f, const std::function<void(const Formula&)>& fn) {
  fn(f);
  for (const auto& c : f.children()) visit(c, fn);
}

// Applies `fn` to every term, rebuilding the tree. Shape is preserved.
inline Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& t : f.args()) args.push_back(fn(t));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case FormulaKind::Eq: return Formula::eq(fn(f.args()[0]), fn(f.args()[1]));
    case FormulaKind::Not: return Formula::negation(map_terms(f.child(), fn));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(map_terms(c, fn));
      return f.is(FormulaKind::And) ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case FormulaKind::Implies: return Formula::implication(map_terms(f.child(0), fn), map_terms(f.child(1), fn));
    case FormulaKind::Iff: return Formula::equivalence(map_terms(f.child(0), fn), map_terms(f.child(1), fn));
    case FormulaKind::ForAll: return Formula::forall(f.variable(), map_terms(f.child(), fn));
    case FormulaKind::Exists: return Formula::exists(f.variable(), map_terms(f.child(), fn));
  }
  return f;
}

// Variables occurring free in `f`.
inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_quantifier()) {
      bound.push_back(g.variable());
      walk(g.child());
      bound.pop_back();
      return;
    }
    for (const auto& t : g.args()) {
      if (t.is_variable() && std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
    }
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return out;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

inline bool is_ground_atom(const Formula& f) {
  if (!f.is_atom()) return false;
  for (const auto& t : f.args()) {
    if (!t.is_ground()) return false;
  }
  return true;
}

// Constants, numerals and the irrel marker occurring anywhere in `f`.
inline void collect_ground_terms(const Formula& f, std::set<Term>& out) {
  visit(f, [&](const Formula& g) {
    for (const auto& t : g.args()) {
      if (t.is_ground()) out.insert(t);
    }
  });
}

}  // namespace logicad::fol
