#pragma once

#include <string>

#include "logicad/fol/formula.hpp"

namespace logicad::fol {

namespace detail {

// Binding strength, loosest first.
enum Prec : int { kQuant = 0, kIff = 1, kImp = 2, kOr = 3, kAnd = 4, kUnary = 5 };

inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::ForAll:
    case FormulaKind::Exists: return kQuant;
    case FormulaKind::Iff: return kIff;
    case FormulaKind::Implies: return kImp;
    case FormulaKind::Or: return kOr;
    case FormulaKind::And: return kAnd;
    default: return kUnary;
  }
}

inline void print_terms(const std::vector<Term>& args, std::string& out) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].str();
  }
}

void print_into(const Formula& f, std::string& out);

inline void print_operand(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(f, out);
  if (parens) out += ')';
}

inline void print_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::True: out += "$T"; return;
    case FormulaKind::False: out += "$F"; return;
    case FormulaKind::Atom:
      out += f.predicate();
      out += '(';
      print_terms(f.args(), out);
      out += ')';
      return;
    case FormulaKind::Eq:
      out += f.args()[0].str();
      out += " = ";
      out += f.args()[1].str();
      return;
    case FormulaKind::Not:
      if (f.child().is(FormulaKind::Eq)) {
        out += f.child().args()[0].str();
        out += " != ";
        out += f.child().args()[1].str();
        return;
      }
      out += '~';
      print_operand(f.child(), precedence(f.child()) < kUnary, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const int self = precedence(f);
      const char* op = f.is(FormulaKind::And) ? " & " : " | ";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += op;
        // Nested chains of the same operator keep their grouping.
        print_operand(f.children()[i], precedence(f.children()[i]) <= self, out);
      }
      return;
    }
    case FormulaKind::Implies:
      print_operand(f.child(0), precedence(f.child(0)) <= kImp, out);
      out += " -> ";
      print_operand(f.child(1), precedence(f.child(1)) < kImp, out);
      return;
    case FormulaKind::Iff:
      print_operand(f.child(0), precedence(f.child(0)) < kIff, out);
      out += " <-> ";
      print_operand(f.child(1), precedence(f.child(1)) <= kIff, out);
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out += f.is(FormulaKind::ForAll) ? "forall " : "exists ";
      out += f.variable();
      out += ". ";
      print_into(f.child(), out);
      return;
  }
}

}  // namespace detail

// Canonical text: minimal parentheses, single spaces around binary
// operators, no spaces inside argument lists.
inline std::string print_formula(const Formula& f) {
  std::string out;
  detail::print_into(f, out);
  return out;
}

inline std::string print_atom(const Formula& atom) { return print_formula(atom); }

}  // namespace logicad::fol
