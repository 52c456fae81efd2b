#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <initializer_list>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/synonyms.hpp"

namespace logicad::forge {

class SynonymOracle {
 public:
  virtual ~SynonymOracle() = default;
  virtual bool query(const std::string& a, const std::string& b) = 0;
};

// Explicit pair list; anything not listed is distinct.
class TableSynonymOracle final : public SynonymOracle {
 public:
  TableSynonymOracle() = default;
  explicit TableSynonymOracle(const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [a, b] : pairs) add(a, b);
  }
  TableSynonymOracle(std::initializer_list<std::pair<std::string, std::string>> pairs) {
    for (const auto& [a, b] : pairs) add(a, b);
  }
  void add(const std::string& a, const std::string& b) { pairs_.insert(std::minmax(a, b)); }
  bool query(const std::string& a, const std::string& b) override { return pairs_.count(std::minmax(a, b)) > 0; }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

// Asks a yes/no question through a text-completion function.
class LlmSynonymOracle final : public SynonymOracle {
 public:
  using Ask = std::function<std::string(const std::string& prompt)>;
  explicit LlmSynonymOracle(Ask ask) : ask_(std::move(ask)) {}

  static std::string prompt_for(const std::string& a, const std::string& b) {
    return "Answer Yes or No: Are " + a + " and " + b + " synonymous or similar?";
  }

  bool query(const std::string& a, const std::string& b) override {
    std::string reply = ask_(prompt_for(a, b));
    std::string word;
    for (char c : reply) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!word.empty()) {
        break;
      }
    }
    if (word == "yes") return true;
    if (word == "no") return false;
    throw ServiceError("OracleUnavailable", "synonym oracle gave neither yes nor no: " + reply, false);
  }

 private:
  Ask ask_;
};

// Queries each unordered pair once, sorted, and remembers the answer.
// Concurrent readers share the cache; misses are serialized.
class CachingSynonymOracle final : public SynonymOracle {
 public:
  explicit CachingSynonymOracle(SynonymOracle& inner) : inner_(inner) {}

  bool query(const std::string& a, const std::string& b) override {
    if (a == b) return true;
    const auto key = std::minmax(a, b);
    {
      std::shared_lock lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ++calls_;
    const bool answer = inner_.query(key.first, key.second);
    cache_.emplace(key, answer);
    return answer;
  }

  std::size_t inner_calls() const {
    std::shared_lock lock(mu_);
    return calls_;
  }

 private:
  SynonymOracle& inner_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, bool> cache_;
  std::size_t calls_ = 0;
};

// Unordered pairs are asked once each, in sorted order, skipping pairs the
// transitive closure has already merged.
inline fol::SynonymClasses build_synonym_classes(const std::set<std::string>& constants, SynonymOracle& oracle) {
  fol::SynonymClasses classes;
  for (const auto& c : constants) classes.add(c);
  std::vector<std::string> names(constants.begin(), constants.end());
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (classes.same(names[i], names[j])) continue;
      if (oracle.query(names[i], names[j])) classes.merge(names[i], names[j]);
    }
  }
  return classes;
}

}  // namespace logicad::forge
