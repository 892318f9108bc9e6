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
#include <random>

#include "gtest/gtest.h"
#include "trsketch/bounds.h"
#include "trsketch/errors.h"

namespace trsketch {
namespace {

BoundsConfig Config(double delta, double epsilon, double c0 = 1.0,
                    double c1 = 0.25 + 1e-9) {
  return {.c0 = c0, .c1 = c1, .delta = delta, .epsilon = epsilon};
}

TEST(MinProjectedDim, ReferenceValues) {
  EXPECT_EQ(MinProjectedDim(100, Config(0.05, 0.1)), 761);
  EXPECT_EQ(MinProjectedDim(1, Config(0.5, 0.99)), 1);
}

TEST(MinProjectedDim, DoublingMBoundedIncrease) {
  for (double eps : {0.05, 0.1, 0.3, 0.7}) {
    const BoundsConfig cfg = Config(0.05, eps, 2.0);
    const int64_t step = static_cast<int64_t>(std::ceil(std::log(2.0) / (2.0 * eps * eps)));
    for (int m = 1; m <= 4096; m *= 2) {
      const int64_t a = MinProjectedDim(m, cfg);
      const int64_t b = MinProjectedDim(2 * m, cfg);
      EXPECT_GE(b, a);
      EXPECT_LE(b - a, step + 1);
    }
  }
}

TEST(MinProjectedDim, RejectsBadInput) {
  EXPECT_THROW(MinProjectedDim(0, Config(0.05, 0.1)), Error);
  EXPECT_THROW(MinProjectedDim(10, Config(1.0, 0.1)), Error);
  EXPECT_THROW(MinProjectedDim(10, Config(0.05, 0.1, 0.5)), Error);
}

TEST(MinAmbientDim, ReferenceValue) {
  EXPECT_EQ(MinAmbientDim(20, Config(0.05, 0.1)), 56151);
}

TEST(MinAmbientDim, RejectsDeltaAtOne) {
  EXPECT_THROW(MinAmbientDim(1, Config(1.0, 0.1)), Error);
  EXPECT_THROW(MinAmbientDim(0, Config(0.05, 0.1)), Error);
  EXPECT_NO_THROW(MinAmbientDim(1, Config(1.0 - 1e-12, 0.1)));
}

TEST(MinAmbientDim, StrictlyIncreasingInD) {
  const BoundsConfig cfg = Config(0.05, 0.1);
  int64_t previous = 0;
  for (int d = 1; d <= 100; ++d) {
    const int64_t n = MinAmbientDim(d, cfg);
    EXPECT_GT(n, previous) << "d " << d;
    previous = n;
  }
}

TEST(DimensionBounds, MonotoneInDeltaAndEpsilon) {
  for (int m : {1, 10, 100}) {
    EXPECT_GE(MinProjectedDim(m, Config(0.01, 0.1)), MinProjectedDim(m, Config(0.1, 0.1)));
    EXPECT_GE(MinProjectedDim(m, Config(0.05, 0.1)), MinProjectedDim(m, Config(0.05, 0.2)));
    EXPECT_GE(MinAmbientDim(m, Config(0.01, 0.1)), MinAmbientDim(m, Config(0.1, 0.1)));
    EXPECT_GE(MinAmbientDim(m, Config(0.05, 0.1)), MinAmbientDim(m, Config(0.05, 0.2)));
  }
}

TEST(DimensionBounds, TheoremRegimeIsFarFromDeskScale) {
  const BoundsConfig cfg = Config(0.05, 0.1);
  const int64_t d = MinProjectedDim(100, cfg);
  EXPECT_EQ(d, 761);
  // (d + 1) ln(2d / delta) / (C1 eps^2) evaluated by hand.
  const double n = 762.0 * std::log(2.0 * 761.0 / 0.05) / (0.25 * 0.01);
  EXPECT_EQ(MinAmbientDim(static_cast<int>(d), cfg), static_cast<int64_t>(std::ceil(n)));
  EXPECT_GT(MinAmbientDim(static_cast<int>(d), cfg), 3'000'000);
}

TEST(BoundsConfig, Validation) {
  EXPECT_NO_THROW(BoundsConfig{}.Validate());
  EXPECT_THROW(Config(0.05, 0.1, 0.9).Validate(), Error);
  EXPECT_THROW(Config(0.05, 0.1, 1.0, 0.25).Validate(), Error);
  EXPECT_THROW(Config(0.0, 0.1).Validate(), Error);
  EXPECT_THROW(Config(0.05, 1.0).Validate(), Error);
}

TEST(LinearSandwichCheck, Examples) {
  SandwichVerdict v = LinearSandwichCheck(-0.5, -0.6, -0.7, 0.2, 1.0);
  EXPECT_TRUE(v.lower_holds);
  EXPECT_TRUE(v.upper_holds);
  EXPECT_NEAR(v.gap_observed, 0.2, 1e-15);
  EXPECT_TRUE(std::isnan(v.gap_bound));

  v = LinearSandwichCheck(-0.7, -0.6, -0.7, 0.2, 1.0);
  EXPECT_FALSE(v.lower_holds);

  for (double eps : {0.0, 0.1, 0.4}) {
    v = LinearSandwichCheck(-0.3, -0.3, -0.3, eps, 2.0);
    EXPECT_TRUE(v.lower_holds);
    EXPECT_TRUE(v.upper_holds);
  }
}

TEST(LinearSandwichCheck, SlackBoundaries) {
  EXPECT_TRUE(LinearSandwichCheck(-1.0, -1.0 + 0.5e-9, -2.0, 0.1, 1.0).lower_holds);
  EXPECT_FALSE(LinearSandwichCheck(-1.0, -1.0 + 2e-9, -2.0, 0.1, 1.0).lower_holds);
  // exact >= plus - eps ||c|| - 1e-9 with plus = 0, eps ||c|| = 0.2.
  EXPECT_TRUE(LinearSandwichCheck(0.0, -0.2 - 0.5e-9, 0.0, 0.1, 2.0).upper_holds);
  EXPECT_FALSE(LinearSandwichCheck(0.0, -0.2 - 2e-9, 0.0, 0.1, 2.0).upper_holds);
}

TEST(QuadraticSandwichCheck, Examples) {
  const SandwichVerdict v = QuadraticSandwichCheck(-0.8, -1.0, -1.1, 0.1, 1.0, 1.0);
  EXPECT_TRUE(v.lower_holds);
  EXPECT_TRUE(v.upper_holds);
  EXPECT_TRUE(QuadraticSandwichCheck(-0.8, -1.5, -1.1, 0.1, 1.0, 1.0).upper_holds);
  EXPECT_FALSE(QuadraticSandwichCheck(-0.8, -1.6, -1.1, 0.1, 1.0, 1.0).upper_holds);
  // Zero slack.
  EXPECT_TRUE(QuadraticSandwichCheck(0.0, -0.1, -0.2, 0.0, 5.0, 5.0).upper_holds);
  EXPECT_FALSE(QuadraticSandwichCheck(0.0, -0.3, -0.2, 0.0, 5.0, 5.0).upper_holds);
  EXPECT_FALSE(QuadraticSandwichCheck(-0.4, -0.3, -0.5, 0.0, 5.0, 5.0).lower_holds);
}

TEST(QuadraticSandwichCheck, ZeroNuclearNormEqualsLinear) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 0.5);
  for (int i = 0; i < 10000; ++i) {
    const double minus = value(gen);
    const double exact = value(gen);
    const double plus = value(gen);
    const double eps = unit(gen);
    const double norm_c = 4.0 * unit(gen);
    const SandwichVerdict a = LinearSandwichCheck(minus, exact, plus, eps, norm_c);
    const SandwichVerdict b =
        QuadraticSandwichCheck(minus, exact, plus, eps, 0.0, norm_c);
    EXPECT_EQ(a.lower_holds, b.lower_holds);
    EXPECT_EQ(a.upper_holds, b.upper_holds);
    EXPECT_EQ(a.gap_observed, b.gap_observed);
    EXPECT_EQ(std::isnan(a.slack), std::isnan(b.slack));
    EXPECT_EQ(std::isnan(a.gap_bound), std::isnan(b.gap_bound));
  }
}

TEST(WithGapBound, AttachesValue) {
  const SandwichVerdict v = WithGapBound(LinearSandwichCheck(0, 0, 0, 0.1, 1), 7.2);
  EXPECT_EQ(v.gap_bound, 7.2);
}

TEST(GapBoundLinear, Examples) {
  EXPECT_NEAR(GapBoundLinear(0.1, 0.5, 2.0), 7.2, 1e-14);
  EXPECT_NEAR(GapBoundLinear(0.1, 0.25, 2.0), 2.0 * GapBoundLinear(0.1, 0.5, 2.0), 1e-14);
  // 2 (1 + 1/2)^2 / (1 - 1/2) = 9 at eps = 1/2, doubled by the 2 eps / r0 choice.
  EXPECT_DOUBLE_EQ(2.0 * 2.0 * (1.0 + 0.5) * (1.0 + 0.5) / (1.0 - 0.5), 18.0);
  EXPECT_NEAR(GapBoundLinear(0.5, 1.0, 1.0), 9.0, 1e-14);
}

TEST(GapBoundLinear, Errors) {
  try {
    GapBoundLinear(0.1, 0.0, 1.0);
    ADD_FAILURE() << "zero fullness accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSet);
  }
  EXPECT_THROW(GapBoundLinear(0.6, 0.5, 1.0), Error);
  EXPECT_THROW(GapBoundLinear(0.0, 0.5, 1.0), Error);
}

TEST(GapBoundQuadratic, Examples) {
  const QuadraticGapBound b = GapBoundQuadratic(0.05, 0.5, 1.0);
  EXPECT_NEAR(b.value, 5.4, 1e-14);
  EXPECT_TRUE(b.in_regime);
  EXPECT_NEAR(GapBoundQuadratic(0.05, 0.5, 0.0).value, 36.0 * 0.05 / 0.5, 1e-14);
  const QuadraticGapBound flagged = GapBoundQuadratic(0.1, 0.5, 1.0);
  EXPECT_FALSE(flagged.in_regime);
  EXPECT_NEAR(flagged.value, 10.8, 1e-13);
  EXPECT_THROW(GapBoundQuadratic(0.05, 0.0, 1.0), Error);
}

TEST(GapBounds, Monotonicity) {
  for (double eps = 0.01; eps < 0.09; eps += 0.01) {
    EXPECT_LT(GapBoundLinear(eps, 0.3, 1.0), GapBoundLinear(eps + 0.01, 0.3, 1.0));
    EXPECT_LT(GapBoundLinear(eps, 0.3, 1.0), GapBoundLinear(eps, 0.3, 1.5));
    EXPECT_GT(GapBoundLinear(eps, 0.3, 1.0), GapBoundLinear(eps, 0.4, 1.0));
    EXPECT_LT(GapBoundQuadratic(eps, 0.3, 1.0).value,
              GapBoundQuadratic(eps + 0.005, 0.3, 1.0).value);
    EXPECT_LT(GapBoundQuadratic(eps, 0.3, 1.0).value,
              GapBoundQuadratic(eps, 0.3, 1.5).value);
    EXPECT_GT(GapBoundQuadratic(eps, 0.3, 1.0).value,
              GapBoundQuadratic(eps, 0.4, 1.0).value);
  }
}

TEST(FullnessGapCheck, Examples) {
  EXPECT_TRUE(FullnessGapCheck(0.5, 0.49, 0.1));
  EXPECT_FALSE(FullnessGapCheck(0.5, 0.40, 0.1));
  EXPECT_TRUE(FullnessGapCheck(0.5, 0.45 - 0.5e-6, 0.1));
  EXPECT_FALSE(FullnessGapCheck(0.5, 0.45 - 2e-6, 0.1));
}

}  // namespace
}  // namespace trsketch
