#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logicad/engine/entailment.hpp"
#include "logicad/fol/synonyms.hpp"
#include "logicad/forge/synonym_oracle.hpp"
#include "logicad/forge/task_spec.hpp"

namespace logicad::forge {

struct Warning {
  std::string code;
  std::string message;
  friend bool operator==(const Warning&, const Warning&) = default;
};

namespace detail {

inline Formula functional_atom(const FunctionalPredicate& fp, Term object, Term value) {
  std::vector<Term> args(2, object);
  args[fp.object_index] = std::move(object);
  args[fp.value_index] = std::move(value);
  return Formula::atom(fp.predicate, std::move(args));
}

inline void check_arity(const TaskSpec& spec, const FunctionalPredicate& fp) {
  if (fp.object_index > 1 || fp.value_index > 1 || fp.object_index == fp.value_index)
    throw ArityError("functional predicate " + fp.predicate + " must have arity 2");
  const auto sig = predicate_signature(spec.norm);
  auto it = sig.find(fp.predicate);
  if (it != sig.end() && (it->second.size() != 1 || *it->second.begin() != 2))
    throw ArityError("functional predicate " + fp.predicate + " is used with arity other than 2");
}

}  // namespace detail

// forall X. exists Y. p(X,Y) & (forall Z. p(X,Z) -> Z = Y)
inline Theory functionality_axioms(const TaskSpec& spec) {
  Theory out;
  for (const auto& fp : spec.functional) {
    detail::check_arity(spec, fp);
    const Term x = Term::variable("X"), y = Term::variable("Y"), z = Term::variable("Z");
    Formula unique = Formula::forall("Z", Formula::implication(detail::functional_atom(fp, x, z), Formula::eq(z, y)));
    out.add(Formula::forall(
        "X", Formula::exists("Y", Formula::conjunction({detail::functional_atom(fp, x, y), std::move(unique)}))));
  }
  return out;
}

// Object constants that occur in the object position of `fp` in the
// (canonicalized) normal specification.
inline std::set<std::string> closure_objects(const Theory& norm, const FunctionalPredicate& fp) {
  std::set<std::string> out;
  for (const auto& f : norm) {
    fol::visit(f, [&](const Formula& g) {
      if (g.is_atom() && g.predicate() == fp.predicate && g.args().size() == 2) {
        const Term& t = g.args()[fp.object_index];
        if (t.is_constant()) out.insert(t.name());
      }
    });
  }
  return out;
}

// forall X. ~p(X,0) -> (X = c1 | ... | X = ck)
inline Theory domain_closure_axioms(const TaskSpec& spec, const fol::SynonymClasses& classes,
                                    std::vector<Warning>* warnings = nullptr) {
  const Theory norm = fol::canonicalize(spec.norm, classes);
  Theory out;
  for (const auto& fp : spec.functional) {
    detail::check_arity(spec, fp);
    const Term x = Term::variable("X");
    const Formula absent = detail::functional_atom(fp, x, Term::numeral(0));
    const auto objects = closure_objects(norm, fp);
    if (objects.empty()) {
      if (warnings)
        warnings->push_back({"EmptyClosure", "functional predicate " + fp.predicate +
                                                 " mentions no objects in [norm]; closure forces every object to count 0"});
      out.add(Formula::forall("X", absent));
      continue;
    }
    std::vector<Formula> alternatives;
    for (const auto& c : objects) alternatives.push_back(Formula::eq(x, Term::constant(c)));
    out.add(Formula::forall("X", Formula::implication(Formula::negation(absent), Formula::disjunction(std::move(alternatives)))));
  }
  return out;
}

inline Theory domain_closure_axioms(const TaskSpec& spec, std::vector<Warning>* warnings = nullptr) {
  return domain_closure_axioms(spec, fol::SynonymClasses{}, warnings);
}

// Appends p(c,n) for every default whose object (or a synonym of it) has no
// p-fact yet. Irrel-valued facts count as mentions.
inline FactSet complete_defaults(const FactSet& facts, const TaskSpec& spec, const fol::SynonymClasses& classes) {
  FactSet out = facts;
  for (const auto& d : spec.defaults) {
    const FunctionalPredicate* fp = spec.functional_for(d.predicate);
    const std::size_t obj = fp ? fp->object_index : 0;
    const std::string rep = classes.representative(d.object);
    bool mentioned = false;
    for (const auto& a : facts) {
      if (a.predicate() != d.predicate || a.args().size() <= obj) continue;
      const Term& t = a.args()[obj];
      if (t.is_constant() && classes.representative(t.name()) == rep) {
        mentioned = true;
        break;
      }
    }
    if (mentioned) continue;
    FunctionalPredicate shape = fp ? *fp : FunctionalPredicate{d.predicate, 0, 1};
    out.add(detail::functional_atom(shape, Term::constant(rep), Term::numeral(d.value)));
  }
  return out;
}

struct IrrelCompilation {
  FactSet facts;
  Theory theory;
};

// p(c,irrel) becomes `exists Y. p(c,Y)`: the object is mentioned, its count
// is left open.
inline IrrelCompilation compile_irrel(const FactSet& facts, const TaskSpec* spec = nullptr) {
  IrrelCompilation out;
  for (const auto& a : facts) {
    bool has_irrel = false;
    for (const auto& t : a.args()) has_irrel = has_irrel || t.is_irrel();
    if (!has_irrel) {
      out.facts.add(a);
      continue;
    }
    const FunctionalPredicate* fp = spec ? spec->functional_for(a.predicate()) : nullptr;
    const std::size_t obj = fp ? fp->object_index : 0;
    if (a.args().size() >= 2 && a.args()[obj].is_irrel())
      throw IrrelInObjectPosition("irrel in object position of " + fol::print_atom(a));
    if (a.args().size() < 2) throw IrrelInObjectPosition("irrel as the only argument of " + fol::print_atom(a));
    std::vector<Term> args = a.args();
    std::vector<std::string> vars;
    for (auto& t : args) {
      if (!t.is_irrel()) continue;
      vars.push_back(vars.empty() ? "Y" : "Y" + std::to_string(vars.size()));
      t = Term::variable(vars.back());
    }
    Formula body = Formula::atom(a.predicate(), std::move(args));
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, body);
    out.theory.add(body);
  }
  return out;
}

struct Assembly {
  Theory gamma;
  FactSet facts;  // completed, canonical, irrel-free
  fol::SynonymClasses classes;
  std::vector<Warning> warnings;
  std::size_t norm_size = 0;
};

inline std::set<std::string> spec_constants(const TaskSpec& spec, const FactSet& facts) {
  std::set<fol::Term> terms;
  for (const auto& f : spec.norm) fol::collect_ground_terms(f, terms);
  for (const auto& a : facts) fol::collect_ground_terms(a, terms);
  std::set<std::string> out;
  for (const auto& t : terms) {
    if (t.is_constant()) out.insert(t.name());
  }
  for (const auto& d : spec.defaults) out.insert(d.object);
  // Table names are included so representatives do not depend on the image.
  if (spec.synonym_table) {
    for (const auto& [a, b] : *spec.synonym_table) {
      out.insert(a);
      out.insert(b);
    }
  }
  return out;
}

// Gamma = norm + functionality + domain closure + compiled irrel facts. The
// unique-name part is carried by canonicalization.
inline Assembly assemble_gamma(const TaskSpec& spec, const FactSet& facts, SynonymOracle& oracle) {
  Assembly out;
  const auto constants = spec_constants(spec, facts);
  if (spec.synonym_table) {
    TableSynonymOracle table(*spec.synonym_table);
    out.classes = build_synonym_classes(constants, table);
  } else {
    out.classes = build_synonym_classes(constants, oracle);
  }
  const Theory norm = fol::canonicalize(spec.norm, out.classes);
  const FactSet completed = complete_defaults(fol::canonicalize(facts, out.classes), spec, out.classes);
  IrrelCompilation compiled = compile_irrel(completed, &spec);

  out.gamma = norm;
  out.norm_size = norm.size();
  out.gamma.append(functionality_axioms(spec));
  out.gamma.append(domain_closure_axioms(spec, out.classes, &out.warnings));
  out.gamma.append(compiled.theory);
  out.facts = std::move(compiled.facts);
  return out;
}

inline Assembly assemble_gamma(const TaskSpec& spec, const FactSet& facts) {
  TableSynonymOracle none;
  return assemble_gamma(spec, facts, none);
}

// Gamma without any image facts must be satisfiable.
inline std::vector<Warning> check_spec(const TaskSpec& spec, SynonymOracle& oracle, std::size_t padding = 1) {
  Assembly a = assemble_gamma(spec, FactSet{}, oracle);
  if (!engine::is_consistent(a.gamma, padding)) throw SpecInconsistent("normal specification for " + spec.category + " is unsatisfiable");
  return a.warnings;
}

}  // namespace logicad::forge
