#pragma once

#include <cstdint>
#include <vector>

#include "logicad/engine/clauses.hpp"
#include "logicad/engine/grounder.hpp"
#include "logicad/engine/sat.hpp"
#include "logicad/engine/universe.hpp"

namespace logicad::engine {

inline void require_irrel_free(const FactSet& facts) {
  for (const auto& a : facts) {
    for (const auto& t : a.args()) {
      if (t.is_irrel()) throw IrrelInFacts("fact still carries irrel; compile it first: " + fol::print_atom(a));
    }
  }
}

// Grounds a theory once over a fixed universe and answers repeated
// entailment queries for different fact sets against it.
class Prover {
 public:
  Prover(const Theory& gamma, Universe universe, std::uint64_t decision_limit = kDefaultDecisionLimit)
      : universe_(std::move(universe)), limit_(decision_limit) {
    base_ = to_clauses(ground(gamma, universe_));
  }

  const Universe& universe() const noexcept { return universe_; }
  const ClauseSet& base_clauses() const noexcept { return base_; }

  // Gamma together with the facts as unit clauses.
  ClauseSet clauses_with(const FactSet& facts) const {
    require_irrel_free(facts);
    ClauseSet cs = base_;
    for (const auto& a : facts) cs.add({positive(cs.atoms.intern(fol::print_atom(a)))});
    return cs;
  }

  SatResult check(const FactSet& facts) const { return is_satisfiable(clauses_with(facts), limit_); }

  // True iff every model of gamma over the universe falsifies some fact.
  bool entails_negation(const FactSet& facts) const { return !check(facts).satisfiable; }

 private:
  Universe universe_;
  std::uint64_t limit_;
  ClauseSet base_;
};

// Gamma |= ~Sigma0 under fixed-domain semantics: gamma together with the facts
// has no model over the mentioned constants/numerals plus `padding` fresh
// elements.
inline bool entails_negation(const Theory& gamma, const FactSet& facts, std::size_t padding = 1,
                             std::uint64_t decision_limit = kDefaultDecisionLimit) {
  require_irrel_free(facts);
  return Prover(gamma, collect_universe(gamma, facts, padding), decision_limit).entails_negation(facts);
}

// Satisfiability of gamma alone, e.g. to reject an inconsistent task spec.
inline bool is_consistent(const Theory& gamma, std::size_t padding = 1, std::uint64_t decision_limit = kDefaultDecisionLimit) {
  return !entails_negation(gamma, FactSet{}, padding, decision_limit);
}

}  // namespace logicad::engine
