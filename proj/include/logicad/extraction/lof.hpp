#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "logicad/error.hpp"

namespace logicad::extraction {

using Vector = std::vector<double>;

inline double euclidean(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DegenerateInput("vectors of different dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Local Outlier Factor with Breunig et al.'s definitions. The k-distance
// neighbourhood includes every point tied with the k-th nearest one.
// Duplicates give a zero mean reachability distance, so lrd = +inf; the ratio
// inf/inf is taken as 1.
inline std::vector<double> lof_scores(const std::vector<Vector>& points, std::size_t k) {
  const std::size_t n = points.size();
  if (n < 2) throw DegenerateInput("LOF needs at least two points");
  if (k < 1 || k > n - 1) throw DegenerateInput("LOF neighbour count must be in [1, n-1]");
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = euclidean(points[i], points[j]);
  }

  std::vector<double> kdist(n);
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(d[i][j]);
    }
    std::nth_element(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1), others.end());
    kdist[i] = others[k - 1];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d[i][j] <= kdist[i]) nbrs[i].push_back(j);
    }
  }

  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t o : nbrs[i]) sum += std::max(kdist[o], d[i][o]);
    lrd[i] = sum == 0.0 ? inf : static_cast<double>(nbrs[i].size()) / sum;
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t o : nbrs[i]) {
      if (std::isinf(lrd[o]) && std::isinf(lrd[i])) {
        sum += 1.0;
      } else {
        sum += lrd[o] / lrd[i];
      }
    }
    out[i] = sum / static_cast<double>(nbrs[i].size());
  }
  return out;
}

enum class SelectPolicy { Random, MinLof };

// Drops candidates with LOF above the threshold (falling back to the lowest
// LOF when nothing survives) and picks one survivor.
inline std::size_t filter_and_select(const std::vector<double>& lof, double threshold, std::uint64_t seed,
                                     SelectPolicy policy = SelectPolicy::Random) {
  if (lof.empty()) throw DegenerateInput("no candidates to select from");
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < lof.size(); ++i) {
    if (lof[i] <= threshold) survivors.push_back(i);
  }
  auto lowest = [&](const std::vector<std::size_t>& idx) {
    std::size_t best = idx.front();
    for (std::size_t i : idx) {
      if (lof[i] < lof[best]) best = i;
    }
    return best;
  };
  if (survivors.empty()) {
    std::vector<std::size_t> all(lof.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return lowest(all);
  }
  if (policy == SelectPolicy::MinLof) return lowest(survivors);
  // Raw engine output rather than a distribution: the engine's sequence is
  // fixed by the standard, distributions are not.
  std::mt19937_64 rng(seed);
  return survivors[static_cast<std::size_t>(rng() % survivors.size())];
}

// Survivor indices, for reporting.
inline std::vector<std::size_t> lof_survivors(const std::vector<double>& lof, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lof.size(); ++i) {
    if (lof[i] <= threshold) out.push_back(i);
  }
  return out;
}

}  // namespace logicad::extraction
