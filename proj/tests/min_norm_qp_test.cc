// Copyright 2026 The trsketch Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include "gtest/gtest.h"
#include "test_util.h"
#include "trsketch/min_norm_qp.h"

namespace trsketch {
namespace {

TEST(MinNormPoint, NoConstraintsGivesOrigin) {
  const InequalityQpResult r = MinNormPoint(Eigen::MatrixXd(0, 3), Eigen::VectorXd(0));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.x, Eigen::VectorXd::Zero(3));
}

TEST(MinNormPoint, SingleHalfspace) {
  Eigen::MatrixXd a(1, 2);
  a << -1.0, 0.0;
  const InequalityQpResult r = MinNormPoint(a, Eigen::VectorXd::Constant(1, -2.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.x(0), 2.0, 1e-12);
  EXPECT_NEAR(r.x(1), 0.0, 1e-12);
  EXPECT_NEAR(r.multipliers(0), 2.0, 1e-10);
}

TEST(MinNormPoint, DetectsInfeasibility) {
  Eigen::MatrixXd a(2, 1);
  a << 1.0, -1.0;
  EXPECT_FALSE(MinNormPoint(a, Eigen::Vector2d(-1.0, -1.0)).feasible);
}

TEST(MinNormPoint, MatchesActiveSetEnumeration) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> normal;
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const int m = 1 + trial % 7;
    const Eigen::MatrixXd a = testing::RandomMatrix(m, n, gen);
    Eigen::VectorXd b(m);
    for (int k = 0; k < m; ++k) b[k] = normal(gen) - 0.5;
    const auto expected = testing::BruteForceMinNorm(a, b);
    const InequalityQpResult r = MinNormPoint(a, b);
    ASSERT_EQ(r.feasible, expected.has_value()) << "trial " << trial;
    if (!expected) continue;
    ++feasible;
    EXPECT_NEAR(r.x.norm(), expected->norm(), 1e-9) << "trial " << trial;
    EXPECT_LE((a * r.x - b).maxCoeff(), 1e-9);
    // KKT of min 1/2 ||x||^2: x + A^T y = 0, y >= 0, complementarity.
    EXPECT_LE((r.x + a.transpose() * r.multipliers).norm(), 1e-8);
    EXPECT_GE(r.multipliers.minCoeff(), -1e-12);
    EXPECT_LE(r.multipliers.cwiseProduct(a * r.x - b).cwiseAbs().maxCoeff(), 1e-8);
  }
  EXPECT_GT(feasible, 100);
}

TEST(MinNormPoint, WideSystemUsesRowSpace) {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd a = testing::RandomMatrix(5, 300, gen);
  const Eigen::VectorXd b = -Eigen::VectorXd::Ones(5);
  const InequalityQpResult r = MinNormPoint(a, b);
  ASSERT_TRUE(r.feasible);
  EXPECT_LE((a * r.x - b).maxCoeff(), 1e-9);
  EXPECT_LE((r.x + a.transpose() * r.multipliers).norm(), 1e-8);
}

TEST(SolveInequalityQp, BoxConstrainedQuadratic) {
  // min 1/2 x'Hx + g'x, H = I, g = (-2, -2), x <= 1 componentwise.
  const InequalityQpResult r = SolveInequalityQp(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d(-2.0, -2.0),
      Eigen::Matrix2d::Identity(), Eigen::Vector2d(1.0, 1.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.x(1), 1.0, 1e-12);
  EXPECT_NEAR(r.multipliers(0), 1.0, 1e-10);
  EXPECT_NEAR(r.objective, -3.0, 1e-12);
}

TEST(SolveInequalityQp, InteriorOptimum) {
  const InequalityQpResult r = SolveInequalityQp(
      2.0 * Eigen::Matrix2d::Identity(), Eigen::Vector2d(-1.0, 0.5),
      Eigen::Matrix2d::Identity(), Eigen::Vector2d(5.0, 5.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.x(0), 0.5, 1e-12);
  EXPECT_NEAR(r.x(1), -0.25, 1e-12);
  EXPECT_LE(r.multipliers.cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace trsketch
