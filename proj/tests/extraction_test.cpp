#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "logicad/embedding/score.hpp"
#include "logicad/extraction/lof.hpp"
#include "support/lof_oracle.hpp"

namespace logicad::extraction {
namespace {

using testing::lof_oracle;
using testing::random_points;

void expect_same(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isinf(a[i]) || std::isinf(b[i])) {
      EXPECT_EQ(a[i], b[i]) << i;
    } else {
      EXPECT_NEAR(a[i], b[i], tol) << i;
    }
  }
}

TEST(Lof, MatchesOracle) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng() % 19, dim = 1 + rng() % 8;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(5, n - 1);
    auto pts = random_points(rng, n, dim, i % 2 == 1);
    expect_same(lof_scores(pts, k), lof_oracle(pts, k), 1e-9);
  }
}

TEST(Lof, IdenticalPointsScoreOne) {
  std::vector<Vector> pts(3, Vector{0.3, 0.4});
  for (double s : lof_scores(pts, 1)) EXPECT_EQ(s, 1.0);
  for (double s : lof_scores(pts, 2)) EXPECT_EQ(s, 1.0);
}

TEST(Lof, IsolatedPointIsOutlier) {
  std::vector<Vector> pts{{0, 0}, {0, 1}, {1, 0}, {10, 10}};
  auto s = lof_scores(pts, 2);
  EXPECT_GT(s[3], 1.5);
  for (int i = 0; i < 3; ++i) EXPECT_LT(s[i], 1.5);
}

TEST(Lof, UniformGridNearOne) {
  std::vector<Vector> pts;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) pts.push_back({double(x), double(y)});
  const auto s = lof_scores(pts, 4);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // Corners of a bounded grid are genuinely sparser.
    const bool corner = (pts[i][0] == 0 || pts[i][0] == 5) && (pts[i][1] == 0 || pts[i][1] == 5);
    if (corner) continue;
    EXPECT_GE(s[i], 0.8);
    EXPECT_LE(s[i], 1.2);
  }
}

TEST(Lof, InvariantUnderPermutationTranslationRotation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto pts = random_points(rng, 10, 2, false);
    const std::size_t k = 1 + rng() % 4;
    auto base = lof_scores(pts, k);

    std::vector<std::size_t> perm(pts.size());
    for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vector> shuffled;
    for (std::size_t j : perm) shuffled.push_back(pts[j]);
    auto s = lof_scores(shuffled, k);
    for (std::size_t j = 0; j < perm.size(); ++j) EXPECT_NEAR(s[j], base[perm[j]], 1e-9);

    const double th = 0.7;
    std::vector<Vector> moved;
    for (const auto& p : pts) moved.push_back({std::cos(th) * p[0] - std::sin(th) * p[1] + 5, std::sin(th) * p[0] + std::cos(th) * p[1] - 3});
    expect_same(lof_scores(moved, k), base, 1e-9);
  }
}

TEST(Lof, RejectsBadK) {
  std::vector<Vector> pts{{0}, {1}, {2}};
  EXPECT_THROW(lof_scores(pts, 0), DegenerateInput);
  EXPECT_THROW(lof_scores(pts, 3), DegenerateInput);
  EXPECT_THROW(lof_scores({{0}}, 1), DegenerateInput);
}

TEST(Select, DropsOutlierAndPicksSurvivor) {
  std::vector<double> lof{1.0, 1.02, 3.4};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto i = filter_and_select(lof, 1.5, seed);
    EXPECT_LT(i, 2u);
    EXPECT_EQ(i, filter_and_select(lof, 1.5, seed));
  }
  EXPECT_EQ(filter_and_select(lof, 1.5, 0, SelectPolicy::MinLof), 0u);
  EXPECT_EQ(lof_survivors(lof, 1.5), (std::vector<std::size_t>{0, 1}));
}

TEST(Select, FallsBackToLowestLof) {
  EXPECT_EQ(filter_and_select({2.0, 1.7, 3.0}, 1.5, 5), 1u);
  EXPECT_EQ(filter_and_select({2.0}, 1.5, 5), 0u);
  EXPECT_THROW(filter_and_select({}, 1.5, 5), DegenerateInput);
}

TEST(Select, SeededChoiceIsReproducible) {
  std::vector<double> lof{1.0, 1.0, 1.0, 1.0};
  std::set<std::size_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    std::mt19937_64 rng(seed);
    const auto want = static_cast<std::size_t>(rng() % 4);
    EXPECT_EQ(filter_and_select(lof, 1.5, seed), want);
    seen.insert(want);
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(AnomalyScore, Examples) {
  using embedding::anomaly_score;
  EXPECT_NEAR(anomaly_score({1, 0}, {1, 0}), 0.0, 1e-9);
  EXPECT_NEAR(anomaly_score({1, 0}, {0, 1}), 1.0, 1e-9);
  EXPECT_NEAR(anomaly_score({1, 0}, {-1, 0}), 2.0, 1e-9);
  EXPECT_THROW(anomaly_score({0, 0}, {1, 0}), ZeroVector);
  EXPECT_THROW(anomaly_score({1, 0}, {1, 0, 0}), DegenerateInput);
}

TEST(AnomalyScore, RangeSymmetryScale) {
  using embedding::anomaly_score;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    Vector a(16), b(16);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    const double s = anomaly_score(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 2.0);
    EXPECT_NEAR(s, anomaly_score(b, a), 1e-12);
    Vector scaled = b;
    for (auto& x : scaled) x *= 17.5;
    EXPECT_NEAR(s, anomaly_score(a, scaled), 1e-12);
    EXPECT_NEAR(anomaly_score(a, a), 0.0, 1e-9);
  }
}

}  // namespace
}  // namespace logicad::extraction
