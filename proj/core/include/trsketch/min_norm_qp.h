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

#ifndef TRSKETCH_MIN_NORM_QP_H_
#define TRSKETCH_MIN_NORM_QP_H_

#include "Eigen/Core"

namespace trsketch {

struct InequalityQpResult {
  bool feasible = false;
  Eigen::VectorXd x;
  // One multiplier per constraint row (zero for inactive rows).
  Eigen::VectorXd multipliers;
  double objective = 0.0;
  int iterations = 0;
};

// Dual active-set method of Goldfarb and Idnani for the strictly convex QP
//   min 1/2 x^T G x + g^T x   s.t.  C x <= h,
// G positive definite. Returns feasible == false when the constraints are
// inconsistent. Zero rows of C are honoured as 0 <= h_i.
InequalityQpResult SolveInequalityQp(const Eigen::MatrixXd& hessian,
                                     const Eigen::VectorXd& gradient,
                                     const Eigen::MatrixXd& constraints,
                                     const Eigen::VectorXd& rhs);

// Euclidean projection of the origin onto {x : C x <= h}.
InequalityQpResult MinNormPoint(const Eigen::MatrixXd& constraints,
                                const Eigen::VectorXd& rhs);

}  // namespace trsketch

#endif  // TRSKETCH_MIN_NORM_QP_H_
