#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logicad/engine/universe.hpp"
#include "logicad/fol/formula.hpp"

namespace logicad::engine {

using fol::FormulaKind;

// Simplifying constructors: boolean constants are absorbed so that a result
// is either exactly $T/$F or free of constants.
namespace simplify {

inline Formula negation(const Formula& f) {
  if (f.is(FormulaKind::True)) return Formula::falsity();
  if (f.is(FormulaKind::False)) return Formula::truth();
  if (f.is(FormulaKind::Not)) return f.child();
  return Formula::negation(f);
}

inline Formula conjunction(std::vector<Formula> fs) {
  std::vector<Formula> kept;
  kept.reserve(fs.size());
  for (auto& f : fs) {
    if (f.is(FormulaKind::False)) return Formula::falsity();
    if (!f.is(FormulaKind::True)) kept.push_back(std::move(f));
  }
  return Formula::conjunction(std::move(kept));
}

inline Formula disjunction(std::vector<Formula> fs) {
  std::vector<Formula> kept;
  kept.reserve(fs.size());
  for (auto& f : fs) {
    if (f.is(FormulaKind::True)) return Formula::truth();
    if (!f.is(FormulaKind::False)) kept.push_back(std::move(f));
  }
  return Formula::disjunction(std::move(kept));
}

inline Formula implication(const Formula& a, const Formula& b) {
  if (a.is(FormulaKind::False) || b.is(FormulaKind::True)) return Formula::truth();
  if (a.is(FormulaKind::True)) return b;
  if (b.is(FormulaKind::False)) return negation(a);
  return Formula::implication(a, b);
}

inline Formula equivalence(const Formula& a, const Formula& b) {
  if (a.is(FormulaKind::True)) return b;
  if (b.is(FormulaKind::True)) return a;
  if (a.is(FormulaKind::False)) return negation(b);
  if (b.is(FormulaKind::False)) return negation(a);
  return Formula::equivalence(a, b);
}

}  // namespace simplify

namespace detail {

using Binding = std::pair<std::string, Term>;

inline Term resolve(const Term& t, const std::vector<Binding>& env) {
  if (!t.is_variable()) return t;
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == t.name()) return it->second;
  }
  throw UnboundVariable({}, t.name());
}

inline Formula ground_rec(const Formula& f, const Universe& u, std::vector<Binding>& env) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Atom: {
      if (env.empty()) return f;
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& t : f.args()) args.push_back(resolve(t, env));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case FormulaKind::Eq:
      // Unique names: distinct canonical terms denote distinct elements.
      return resolve(f.args()[0], env) == resolve(f.args()[1], env) ? Formula::truth() : Formula::falsity();
    case FormulaKind::Not: return simplify::negation(ground_rec(f.child(), u, env));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) {
        Formula g = ground_rec(c, u, env);
        // Short-circuit on the absorbing element.
        if (f.is(FormulaKind::And) && g.is(FormulaKind::False)) return g;
        if (f.is(FormulaKind::Or) && g.is(FormulaKind::True)) return g;
        cs.push_back(std::move(g));
      }
      return f.is(FormulaKind::And) ? simplify::conjunction(std::move(cs)) : simplify::disjunction(std::move(cs));
    }
    case FormulaKind::Implies: return simplify::implication(ground_rec(f.child(0), u, env), ground_rec(f.child(1), u, env));
    case FormulaKind::Iff: return simplify::equivalence(ground_rec(f.child(0), u, env), ground_rec(f.child(1), u, env));
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      const bool universal = f.is(FormulaKind::ForAll);
      std::vector<Formula> cs;
      cs.reserve(u.size());
      for (const auto& e : u.elements()) {
        env.emplace_back(f.variable(), e);
        Formula g = ground_rec(f.child(), u, env);
        env.pop_back();
        if (universal && g.is(FormulaKind::False)) return g;
        if (!universal && g.is(FormulaKind::True)) return g;
        cs.push_back(std::move(g));
      }
      return universal ? simplify::conjunction(std::move(cs)) : simplify::disjunction(std::move(cs));
    }
  }
  return f;
}

}  // namespace detail

// Instantiates every quantifier over `u`: forall becomes a conjunction and
// exists a disjunction over the elements. Ground equalities are decided
// syntactically. Each output formula is quantifier-free and ground.
inline Formula ground(const Formula& f, const Universe& u) {
  std::vector<detail::Binding> env;
  return detail::ground_rec(f, u, env);
}

inline std::vector<Formula> ground(const Theory& t, const Universe& u) {
  std::vector<Formula> out;
  out.reserve(t.size());
  for (const auto& f : t) out.push_back(ground(f, u));
  return out;
}

}  // namespace logicad::engine
