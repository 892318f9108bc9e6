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

#ifndef TRSKETCH_BOUNDS_H_
#define TRSKETCH_BOUNDS_H_

#include <cstdint>

namespace trsketch {

// Additive slack used by every inequality verdict.
inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kFullnessSlack = 1e-6;

struct BoundsConfig {
  double c0 = 1.0;
  double c1 = 0.25 + 1e-9;
  double delta = 0.05;
  double epsilon = 0.1;

  // Requires c0 >= 1, c1 > 1/4, delta and epsilon in (0, 1).
  void Validate() const;
};

// ceil(ln(m / delta) / (c0 eps^2)).
int64_t MinProjectedDim(int m, const BoundsConfig& config);
// ceil((d + 1) ln(2 d / delta) / (c1 eps^2)).
int64_t MinAmbientDim(int d, const BoundsConfig& config);

struct SandwichVerdict {
  bool lower_holds = false;
  bool upper_holds = false;
  // NaN until a fullness-based bound is attached with WithGapBound.
  double gap_bound = 0.0;
  double gap_observed = 0.0;
  double slack = 0.0;
};

// lower: obj_minus >= obj_exact; upper: obj_exact >= obj_plus - eps ||c||.
SandwichVerdict LinearSandwichCheck(double obj_minus, double obj_exact,
                                    double obj_plus, double epsilon,
                                    double norm_c);
// upper: obj_exact >= obj_plus - 3 eps ||Q||_* - eps ||c||.
SandwichVerdict QuadraticSandwichCheck(double obj_minus, double obj_exact,
                                       double obj_plus, double epsilon,
                                       double nuclear_q, double norm_c);
SandwichVerdict WithGapBound(SandwichVerdict verdict, double gap_bound);

// 18 eps ||c|| / fullness.
double GapBoundLinear(double epsilon, double fullness, double norm_c);

struct QuadraticGapBound {
  double value = 0.0;
  // False when eps >= 0.1, where the bound is not certified.
  bool in_regime = true;
};

// eps (36 + 18 ||c||) / fullness.
QuadraticGapBound GapBoundQuadratic(double epsilon, double fullness,
                                    double norm_c);

// full_projected_plus >= (1 - eps) full_original - kFullnessSlack.
bool FullnessGapCheck(double full_original, double full_projected_plus,
                      double epsilon);

}  // namespace trsketch

#endif  // TRSKETCH_BOUNDS_H_
