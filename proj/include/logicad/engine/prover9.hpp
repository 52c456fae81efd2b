#pragma once

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "logicad/fol/parser.hpp"
#include "logicad/fol/synonyms.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::engine {

using fol::FormulaKind;

namespace detail {

inline std::string p9_term(const fol::Term& t) { return t.is_variable() ? "v" + t.name() : t.str(); }

inline std::string p9_formula(const fol::Formula& f) {
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < f.children().size(); ++i) {
      if (i) s += op;
      s += p9_formula(f.children()[i]);
    }
    return s + ")";
  };
  switch (f.kind()) {
    case FormulaKind::True: return "$T";
    case FormulaKind::False: return "$F";
    case FormulaKind::Atom: {
      std::string s = f.predicate() + "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) s += ",";
        s += p9_term(f.args()[i]);
      }
      return s + ")";
    }
    case FormulaKind::Eq: return "(" + p9_term(f.args()[0]) + " = " + p9_term(f.args()[1]) + ")";
    case FormulaKind::Not: return "-" + p9_formula(f.child());
    case FormulaKind::And: return join(" & ");
    case FormulaKind::Or: return join(" | ");
    case FormulaKind::Implies: return "(" + p9_formula(f.child(0)) + " -> " + p9_formula(f.child(1)) + ")";
    case FormulaKind::Iff: return "(" + p9_formula(f.child(0)) + " <-> " + p9_formula(f.child(1)) + ")";
    case FormulaKind::ForAll: return "(all v" + f.variable() + " " + p9_formula(f.child()) + ")";
    case FormulaKind::Exists: return "(exists v" + f.variable() + " " + p9_formula(f.child()) + ")";
  }
  return {};
}

}  // namespace detail

inline constexpr std::string_view kProver9FactsMarker = "% image facts";

// Renders gamma and the facts as a Prover9 input file. Unique names are made
// explicit as pairwise inequalities between all mentioned constants and
// numerals; merged synonyms come back as equalities. The goal is `$F`, so a
// proof means gamma plus the facts is contradictory (the image is abnormal).
inline std::string export_prover9(const fol::Theory& gamma, const fol::FactSet& facts,
                                  const fol::SynonymClasses* classes = nullptr) {
  std::set<fol::Term> names;
  for (const auto& f : gamma) fol::collect_ground_terms(f, names);
  for (const auto& f : facts) fol::collect_ground_terms(f, names);
  std::vector<fol::Term> distinct(names.begin(), names.end());

  std::ostringstream os;
  os << "% Prover9 input generated by logicad\n";
  os << "formulas(assumptions).\n";
  os << "  % normality hypotheses\n";
  for (const auto& f : gamma) os << "  " << detail::p9_formula(f) << ".\n";
  if (classes) {
    os << "  % synonyms\n";
    for (const auto& cls : classes->classes()) {
      for (std::size_t i = 1; i < cls.size(); ++i) os << "  " << cls[0] << " = " << cls[i] << ".\n";
    }
  }
  os << "  % unique names\n";
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      os << "  " << distinct[i].str() << " != " << distinct[j].str() << ".\n";
    }
  }
  os << "  " << kProver9FactsMarker << "\n";
  for (const auto& a : facts) os << "  " << fol::print_atom(a) << ".\n";
  os << "end_of_list.\n\n";
  os << "formulas(goals).\n";
  os << "  $F.\n";
  os << "end_of_list.\n";
  return os.str();
}

// Reads back the fact block written by export_prover9.
inline fol::FactSet import_prover9_facts(std::string_view text) {
  const auto start = text.find(kProver9FactsMarker);
  if (start == std::string_view::npos) throw SpecError("no fact block in Prover9 file");
  const auto body_start = text.find('\n', start);
  const auto end = text.find("end_of_list.", body_start);
  if (body_start == std::string_view::npos || end == std::string_view::npos) throw SpecError("unterminated fact block in Prover9 file");
  std::string block(text.substr(body_start + 1, end - body_start - 1));
  for (auto& c : block) {
    if (c == '.') c = ';';
  }
  return fol::parse_facts(block);
}

}  // namespace logicad::engine
