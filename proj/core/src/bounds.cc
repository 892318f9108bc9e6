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

#include "trsketch/bounds.h"

#include <cmath>
#include <limits>

#include "fmt/format.h"
#include "trsketch/errors.h"

namespace trsketch {
namespace {

void RequireFinite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("{} requires finite inputs", what));
    }
  }
}

int64_t CeilToInt(double value) {
  return static_cast<int64_t>(std::ceil(value));
}

}  // namespace

void BoundsConfig::Validate() const {
  if (!(c0 >= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("C0 must be at least 1, got {}", c0));
  }
  if (!(c1 > 0.25)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("C1 must exceed 0.25, got {}", c1));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("delta must lie in (0, 1), got {}", delta));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("epsilon must lie in (0, 1), got {}", epsilon));
  }
}

int64_t MinProjectedDim(int m, const BoundsConfig& config) {
  config.Validate();
  if (m < 1) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("constraint count must be at least 1, got {}", m));
  }
  const double eps = config.epsilon;
  return CeilToInt(std::log(m / config.delta) / (config.c0 * eps * eps));
}

int64_t MinAmbientDim(int d, const BoundsConfig& config) {
  config.Validate();
  if (d < 1) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("projected dimension must be at least 1, got {}", d));
  }
  const double eps = config.epsilon;
  return CeilToInt((d + 1.0) * std::log(2.0 * d / config.delta) /
                   (config.c1 * eps * eps));
}

SandwichVerdict LinearSandwichCheck(double obj_minus, double obj_exact,
                                    double obj_plus, double epsilon,
                                    double norm_c) {
  return QuadraticSandwichCheck(obj_minus, obj_exact, obj_plus, epsilon, 0.0,
                                norm_c);
}

SandwichVerdict QuadraticSandwichCheck(double obj_minus, double obj_exact,
                                       double obj_plus, double epsilon,
                                       double nuclear_q, double norm_c) {
  RequireFinite({obj_minus, obj_exact, obj_plus, epsilon, nuclear_q, norm_c},
                "sandwich check");
  if (nuclear_q < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("nuclear norm must be nonnegative, got {}", nuclear_q));
  }
  SandwichVerdict verdict;
  verdict.lower_holds = obj_minus >= obj_exact - kBoundSlack;
  verdict.upper_holds = obj_exact >= obj_plus - 3.0 * epsilon * nuclear_q -
                                         epsilon * norm_c - kBoundSlack;
  verdict.gap_observed = obj_minus - obj_plus;
  verdict.gap_bound = std::numeric_limits<double>::quiet_NaN();
  verdict.slack = std::numeric_limits<double>::quiet_NaN();
  return verdict;
}

SandwichVerdict WithGapBound(SandwichVerdict verdict, double gap_bound) {
  verdict.gap_bound = gap_bound;
  verdict.slack = gap_bound - verdict.gap_observed;
  return verdict;
}

double GapBoundLinear(double epsilon, double fullness, double norm_c) {
  RequireFinite({epsilon, fullness, norm_c}, "linear gap bound");
  if (!(fullness > 0.0)) {
    throw Error(ErrorCode::kDegenerateSet,
                fmt::format("fullness must be positive, got {}", fullness));
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("epsilon must lie in (0, 0.5], got {}", epsilon));
  }
  return 18.0 * epsilon * norm_c / fullness;
}

QuadraticGapBound GapBoundQuadratic(double epsilon, double fullness,
                                    double norm_c) {
  RequireFinite({epsilon, fullness, norm_c}, "quadratic gap bound");
  if (!(fullness > 0.0)) {
    throw Error(ErrorCode::kDegenerateSet,
                fmt::format("fullness must be positive, got {}", fullness));
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("epsilon must be positive, got {}", epsilon));
  }
  QuadraticGapBound bound;
  bound.value = epsilon * (36.0 + 18.0 * norm_c) / fullness;
  bound.in_regime = epsilon < 0.1;
  return bound;
}

bool FullnessGapCheck(double full_original, double full_projected_plus,
                      double epsilon) {
  RequireFinite({full_original, full_projected_plus, epsilon},
                "fullness gap check");
  if (full_original < 0.0 || full_projected_plus < 0.0 || epsilon < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "fullness gap check requires nonnegative inputs");
  }
  return full_projected_plus >= (1.0 - epsilon) * full_original - kFullnessSlack;
}

}  // namespace trsketch
