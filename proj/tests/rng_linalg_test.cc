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


#include <cmath>
#include <cstdint>
#include <set>

#include "Eigen/Eigenvalues"
#include "gtest/gtest.h"
#include "trsketch/errors.h"
#include "trsketch/linalg.h"
#include "trsketch/rng.h"

namespace trsketch {
namespace {

TEST(SplitMix64, MatchesReferenceSequence) {
  // Published reference outputs of splitmix64 seeded with 0.
  uint64_t state = 0;
  EXPECT_EQ(SplitMix64(state), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(SplitMix64(state), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(SplitMix64(state), 0x06c45d188009454fULL);
}

TEST(DeriveSeed, DistinctStreamsGiveDistinctSeeds) {
  std::set<uint64_t> seen;
  for (uint64_t master = 0; master < 20; ++master) {
    for (uint64_t stream = 0; stream < 50; ++stream) {
      seen.insert(DeriveSeed(master, stream));
    }
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextU64(), b.NextU64());
    EXPECT_EQ(a.Gaussian(), b.Gaussian());
  }
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Rng, GaussianMoments) {
  Rng rng(11);
  const int count = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  double sum4 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sum2 += g * g;
    sum4 += g * g * g * g;
  }
  EXPECT_NEAR(sum / count, 0.0, 0.01);
  EXPECT_NEAR(sum2 / count, 1.0, 0.02);
  EXPECT_NEAR(sum4 / count, 3.0, 0.1);
}

TEST(Rng, GaussianMatrixStddev) {
  Rng rng(5);
  const Eigen::MatrixXd g = rng.GaussianMatrix(300, 300, 0.1);
  EXPECT_NEAR(g.squaredNorm() / g.size(), 0.01, 0.0005);
}

TEST(Rng, SphereAndBall) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(rng.UnitSphere(7).norm(), 1.0, 1e-14);
    EXPECT_LE(rng.InBall(4, 2.5).norm(), 2.5 + 1e-14);
  }
  // Radius of a uniform point in the 3-ball: E||x|| = 3R/4.
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += rng.InBall(3, 1.0).norm();
  EXPECT_NEAR(mean / 20000, 0.75, 0.01);
}

TEST(SymmetricSpectralNorm, AgreesWithEigensolver) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd g = rng.GaussianMatrix(30, 30);
    const Eigen::MatrixXd s = 0.5 * (g + g.transpose());
    const double expected =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().cwiseAbs().maxCoeff();
    const SpectralNormResult result = SymmetricSpectralNorm(s);
    EXPECT_TRUE(result.converged);
    EXPECT_NEAR(result.value, expected, 1e-6 * expected);
  }
}

TEST(SymmetricSpectralNorm, ZeroAndEmpty) {
  EXPECT_EQ(SymmetricSpectralNorm(Eigen::MatrixXd::Zero(4, 4)).value, 0.0);
  EXPECT_EQ(SymmetricSpectralNorm(Eigen::MatrixXd(0, 0)).value, 0.0);
}

TEST(SymmetricSpectralNorm, NegativeDominantEigenvalue) {
  Eigen::MatrixXd s = Eigen::Vector3d(-5.0, 2.0, 1.0).asDiagonal();
  EXPECT_NEAR(SymmetricSpectralNorm(s).value, 5.0, 1e-7);
}

TEST(SpectralNorm, RectangularMatchesSingularValue) {
  Eigen::MatrixXd m(2, 3);
  m << 3, 0, 0, 0, 4, 0;
  EXPECT_NEAR(SpectralNorm(m), 4.0, 1e-12);
}

TEST(Symmetrize, AveragesWithTranspose) {
  Eigen::Matrix2d m;
  m << 1, 2, 4, 3;
  const Eigen::MatrixXd s = Symmetrize(m);
  EXPECT_DOUBLE_EQ(s(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(s(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
}

TEST(RandomOrthonormalColumns, OrthonormalAndDeterministic) {
  const Eigen::MatrixXd u = RandomOrthonormalColumns(40, 6, 21);
  EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-12);
  EXPECT_EQ(u, RandomOrthonormalColumns(40, 6, 21));
  EXPECT_NE(u, RandomOrthonormalColumns(40, 6, 22));
}

TEST(AllFinite, DetectsNanAndInf) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(2, 2);
  EXPECT_TRUE(AllFinite(m));
  m(1, 0) = std::nan("");
  EXPECT_FALSE(AllFinite(m));
  m(1, 0) = INFINITY;
  EXPECT_FALSE(AllFinite(m));
}

TEST(Error, CarriesCode) {
  const Error error(ErrorCode::kDegenerateSet, "empty");
  EXPECT_EQ(error.code(), ErrorCode::kDegenerateSet);
  EXPECT_NE(std::string(error.what()).find("empty"), std::string::npos);
  EXPECT_FALSE(ErrorCodeName(ErrorCode::kIo).empty());
}

}  // namespace
}  // namespace trsketch
