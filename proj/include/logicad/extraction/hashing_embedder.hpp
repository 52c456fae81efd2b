#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "logicad/extraction/clients.hpp"

namespace logicad::extraction {

// Offline embedder: signed feature hashing of lower-cased word unigrams and
// bigrams. Deterministic across platforms (FNV-1a).
class HashingEmbedder : public EmbeddingClient {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}

  std::vector<double> embed(const std::string& text) override {
    std::vector<double> v(dim_, 0.0);
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
      const auto c = static_cast<unsigned char>(ch);
      if (std::isalnum(c)) {
        cur += static_cast<char>(std::tolower(c));
      } else if (!cur.empty()) {
        words.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) words.push_back(cur);
    auto add = [&](const std::string& feature) {
      const std::uint64_t h = fnv1a(feature);
      v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    };
    for (std::size_t i = 0; i < words.size(); ++i) {
      add(words[i]);
      if (i + 1 < words.size()) add(words[i] + " " + words[i + 1]);
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    if (n == 0.0) {
      v[0] = 1.0;  // empty text still gets a unit vector
      return v;
    }
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::size_t dim_;
};

}  // namespace logicad::extraction
