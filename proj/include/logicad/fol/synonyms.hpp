#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "logicad/fol/formula.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::fol {

// Partition of constant names into synonym classes. Each class is represented
// by its lexicographically least member. Names never registered behave as
// singleton classes.
class SynonymClasses {
 public:
  void add(const std::string& name) { parent_.try_emplace(name, name); }

  void merge(const std::string& a, const std::string& b) {
    add(a);
    add(b);
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra == rb) return;
    // Keep the least name at the root so find() yields the representative.
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
  }

  std::string representative(const std::string& name) const {
    if (!parent_.count(name)) return name;
    return find(name);
  }

  bool same(const std::string& a, const std::string& b) const { return representative(a) == representative(b); }

  // Classes in order of their representative; members sorted.
  std::vector<std::vector<std::string>> classes() const {
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [name, _] : parent_) groups[find(name)].push_back(name);
    std::vector<std::vector<std::string>> out;
    for (auto& [_, members] : groups) out.push_back(std::move(members));
    return out;
  }

  std::vector<std::string> members_of(const std::string& name) const {
    std::vector<std::string> out;
    const std::string rep = representative(name);
    for (const auto& [n, _] : parent_) {
      if (find(n) == rep) out.push_back(n);
    }
    if (out.empty()) out.push_back(name);
    return out;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::string find(std::string name) const {
    for (;;) {
      const std::string& p = parent_.at(name);
      if (p == name) return name;
      name = p;
    }
  }

  std::map<std::string, std::string> parent_;
};

inline Term canonicalize(const Term& t, const SynonymClasses& classes) {
  if (!t.is_constant()) return t;
  const std::string rep = classes.representative(t.name());
  return rep == t.name() ? t : Term::constant(rep);
}

inline Formula canonicalize(const Formula& f, const SynonymClasses& classes) {
  return map_terms(f, [&](const Term& t) { return canonicalize(t, classes); });
}

inline Theory canonicalize(const Theory& t, const SynonymClasses& classes) {
  Theory out;
  for (const auto& f : t) out.add(canonicalize(f, classes));
  return out;
}

// Facts that collapse onto the same canonical atom are merged.
inline FactSet canonicalize(const FactSet& facts, const SynonymClasses& classes) {
  FactSet out;
  for (const auto& a : facts) out.add(canonicalize(a, classes));
  return out;
}

}  // namespace logicad::fol
