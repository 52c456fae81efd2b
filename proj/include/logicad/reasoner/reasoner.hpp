#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logicad/engine/entailment.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::reasoner {

using fol::FactSet;
using fol::Theory;

enum class Label { Normal, Abnormal };

struct Verdict {
  Label label = Label::Normal;
  double binary_score() const noexcept { return label == Label::Abnormal ? 1.0 : 0.0; }
  bool abnormal() const noexcept { return label == Label::Abnormal; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline const char* to_string(Label l) { return l == Label::Abnormal ? "abnormal" : "normal"; }

struct Options {
  std::size_t padding = 1;
  std::uint64_t decision_limit = engine::kDefaultDecisionLimit;
};

inline Verdict classify(const Theory& gamma, const FactSet& facts, const Options& opt = {}) {
  return {engine::entails_negation(gamma, facts, opt.padding, opt.decision_limit) ? Label::Abnormal : Label::Normal};
}

struct Explanation {
  FactSet atoms;  // in Sigma0 order
};

// Deletion-based minimization in Sigma0 order. The universe is fixed up front
// from gamma and the full fact set; dropping a fact therefore never shrinks
// the domain, which keeps entailment monotone across the loop.
inline Explanation minimal_explanation(const Theory& gamma, const FactSet& facts, const Options& opt = {}) {
  engine::Prover prover(gamma, engine::collect_universe(gamma, facts, opt.padding), opt.decision_limit);
  if (!prover.entails_negation(facts)) throw NotAnomalous("facts are consistent with the normal specification");
  std::vector<fol::Formula> kept(facts.begin(), facts.end());
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<fol::Formula> trial = kept;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (prover.entails_negation(FactSet(trial))) {
      kept = std::move(trial);
    } else {
      ++i;
    }
  }
  return {FactSet(kept)};
}

// Post-hoc check: the atoms contradict gamma and every one of them is needed.
// Single deletions suffice because entailment is monotone over a fixed universe.
inline bool is_minimal_explanation(const Theory& gamma, const FactSet& all_facts, const FactSet& atoms, const Options& opt = {}) {
  engine::Prover prover(gamma, engine::collect_universe(gamma, all_facts, opt.padding), opt.decision_limit);
  if (!prover.entails_negation(atoms)) return false;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::vector<fol::Formula> rest(atoms.begin(), atoms.end());
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (prover.entails_negation(FactSet(rest))) return false;
  }
  return true;
}

namespace detail {

inline std::string join_atoms(const FactSet& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += (i + 1 == atoms.size()) ? " and " : ", ";
    out += fol::print_atom(atoms.atoms()[i]);
  }
  return out;
}

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
}

}  // namespace detail

inline constexpr const char* kNormalNarrative = "No logical anomaly detected.";

// `tmpl` may use {atoms}; empty selects the built-in wording.
inline std::string render_narrative(const Verdict& v, const Explanation* e, const std::string& tmpl = {}) {
  if (!v.abnormal()) return kNormalNarrative;
  if (!e) return "Logical anomaly detected.";
  if (e->atoms.empty()) return "Conflict: the normal specification cannot be satisfied even without any image facts.";
  const std::string atoms = detail::join_atoms(e->atoms);
  std::string out;
  if (!tmpl.empty()) {
    out = tmpl;
  } else if (e->atoms.size() == 1) {
    out = "Conflict: {atoms} is ruled out by the normal specification.";
  } else {
    out = "Conflict: {atoms} cannot hold together under the normal specification.";
  }
  detail::replace_all(out, "{atoms}", atoms);
  return out;
}

}  // namespace logicad::reasoner
