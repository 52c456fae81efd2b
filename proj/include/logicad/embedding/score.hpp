#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "logicad/error.hpp"

namespace logicad::embedding {

inline std::vector<double> normalized(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  const double norm = std::sqrt(s);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ZeroVector("embedding has zero or non-finite norm");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

// ascore = 1 - <e_n, e_q> after re-normalizing both inputs, clamped to [0, 2].
inline double anomaly_score(const std::vector<double>& e_n, const std::vector<double>& e_q) {
  if (e_n.size() != e_q.size()) throw DegenerateInput("embeddings of different dimension");
  const auto a = normalized(e_n);
  const auto b = normalized(e_q);
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(1.0 - dot, 0.0, 2.0);
}

}  // namespace logicad::embedding
