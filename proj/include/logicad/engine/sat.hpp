#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logicad/engine/clauses.hpp"
#include "logicad/error.hpp"

namespace logicad::engine {

inline constexpr std::uint64_t kDefaultDecisionLimit = 10'000'000;

struct SatResult {
  bool satisfiable = false;
  // Truth value per atom id; present iff satisfiable.
  std::optional<std::vector<bool>> model;
  std::uint64_t decisions = 0;
};

inline bool satisfies(const ClauseSet& cs, const std::vector<bool>& model) {
  for (const auto& c : cs.clauses) {
    bool sat = false;
    for (Literal l : c) {
      if (model.at(static_cast<std::size_t>(atom_of(l))) == (l > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

// Model restricted to non-auxiliary atoms, keyed by atom text.
inline std::map<std::string, bool> project_model(const ClauseSet& cs, const std::vector<bool>& model) {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < cs.atoms.size(); ++i) {
    if (!cs.atoms.is_aux(static_cast<int>(i))) out.emplace(cs.atoms.name(static_cast<int>(i)), model[i]);
  }
  return out;
}

namespace detail {

// DPLL with two-watched-literal unit propagation and chronological
// backtracking. Branching picks the atom with the most occurrences in the
// shortest open clauses (ties: lowest atom id), and its more frequent
// polarity there (ties: false).
class Dpll {
 public:
  Dpll(const ClauseSet& cs, std::uint64_t decision_limit)
      : cs_(cs), limit_(decision_limit), value_(cs.atoms.size(), kUnset), watches_(2 * cs.atoms.size()) {}

  SatResult solve() {
    SatResult result;
    for (std::size_t ci = 0; ci < cs_.clauses.size(); ++ci) {
      const Clause& c = cs_.clauses[ci];
      if (c.empty()) return result;
      if (c.size() == 1) {
        if (!enqueue(c[0])) return result;
      } else {
        watches_[index(c[0])].push_back(ci);
        watches_[index(c[1])].push_back(ci);
        watched_.push_back({c[0], c[1]});
        continue;
      }
      watched_.push_back({c[0], 0});
    }

    for (;;) {
      if (!propagate()) {
        if (!backtrack()) {
          result.decisions = decisions_;
          return result;
        }
        continue;
      }
      const Literal next = pick_branch();
      if (next == 0) break;
      if (++decisions_ > limit_) {
        throw ResourceLimit("satisfiability search exceeded " + std::to_string(limit_) + " decisions");
      }
      levels_.push_back({trail_.size(), next, false});
      enqueue(next);
    }

    std::vector<bool> model(value_.size());
    for (std::size_t i = 0; i < value_.size(); ++i) model[i] = value_[i] == kTrue;
    if (!satisfies(cs_, model)) throw std::logic_error("sat: model verification failed");
    result.satisfiable = true;
    result.model = std::move(model);
    result.decisions = decisions_;
    return result;
  }

 private:
  static constexpr std::int8_t kUnset = -1;
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;

  struct Level {
    std::size_t trail_start;
    Literal decision;
    bool flipped;
  };

  static std::size_t index(Literal l) { return 2 * static_cast<std::size_t>(atom_of(l)) + (l < 0 ? 1 : 0); }

  std::int8_t value(Literal l) const {
    const std::int8_t v = value_[static_cast<std::size_t>(atom_of(l))];
    if (v == kUnset) return kUnset;
    return (l > 0) == (v == kTrue) ? kTrue : kFalse;
  }

  bool enqueue(Literal l) {
    const std::int8_t v = value(l);
    if (v == kFalse) return false;
    if (v == kTrue) return true;
    value_[static_cast<std::size_t>(atom_of(l))] = l > 0 ? kTrue : kFalse;
    trail_.push_back(l);
    return true;
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      const Literal falsified = -trail_[head_++];
      auto& ws = watches_[index(falsified)];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::size_t ci = ws[i];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        auto& w = watched_[ci];
        if (w[0] == falsified) std::swap(w[0], w[1]);
        if (value(w[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (Literal l : cs_.clauses[ci]) {
          if (l == w[0] || l == w[1]) continue;
          if (value(l) != kFalse) {
            w[1] = l;
            watches_[index(l)].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(w[0])) conflict = true;
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  void undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
      value_[static_cast<std::size_t>(atom_of(trail_.back()))] = kUnset;
      trail_.pop_back();
    }
    head_ = trail_size;
  }

  bool backtrack() {
    while (!levels_.empty() && levels_.back().flipped) {
      undo_to(levels_.back().trail_start);
      levels_.pop_back();
    }
    if (levels_.empty()) return false;
    Level& lv = levels_.back();
    undo_to(lv.trail_start);
    lv.flipped = true;
    lv.decision = -lv.decision;
    enqueue(lv.decision);
    return true;
  }

  Literal pick_branch() const {
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pos_count;
    std::vector<std::size_t> neg_count;
    for (const auto& c : cs_.clauses) {
      std::size_t open = 0;
      bool sat = false;
      for (Literal l : c) {
        const auto v = value(l);
        if (v == kTrue) {
          sat = true;
          break;
        }
        if (v == kUnset) ++open;
      }
      if (sat || open == 0) continue;
      if (open < shortest) {
        shortest = open;
        pos_count.assign(value_.size(), 0);
        neg_count.assign(value_.size(), 0);
      }
      if (open == shortest) {
        for (Literal l : c) {
          if (value(l) != kUnset) continue;
          (l > 0 ? pos_count : neg_count)[static_cast<std::size_t>(atom_of(l))]++;
        }
      }
    }
    // Every clause satisfied; unassigned atoms default to false.
    if (shortest == std::numeric_limits<std::size_t>::max()) return 0;
    std::size_t best = 0;
    std::size_t best_score = 0;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      const std::size_t score = pos_count[i] + neg_count[i];
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    const Literal l = positive(static_cast<int>(best));
    return pos_count[best] > neg_count[best] ? l : -l;
  }

  const ClauseSet& cs_;
  std::uint64_t limit_;
  std::uint64_t decisions_ = 0;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::array<Literal, 2>> watched_;
  std::vector<Literal> trail_;
  std::size_t head_ = 0;
  std::vector<Level> levels_;
};

}  // namespace detail

// Complete satisfiability check. Throws ResourceLimit once the number of
// branching decisions exceeds `decision_limit`; never guesses a verdict.
inline SatResult is_satisfiable(const ClauseSet& cs, std::uint64_t decision_limit = kDefaultDecisionLimit) {
  return detail::Dpll(cs, decision_limit).solve();
}

}  // namespace logicad::engine
