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

#ifndef TRSKETCH_PROJECTIONS_H_
#define TRSKETCH_PROJECTIONS_H_

#include "Eigen/Core"

namespace trsketch {

Eigen::VectorXd ProjectOntoBall(const Eigen::VectorXd& x, double radius);

// Projection onto {y : a^T y <= beta}; a must be nonzero.
Eigen::VectorXd ProjectOntoHalfspace(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& a, double beta);

struct DykstraResult {
  Eigen::VectorXd point;
  int sweeps = 0;
  bool converged = false;
};

// Dykstra's algorithm for the Euclidean projection of `x` onto
// {y : A y <= b} intersected with the ball of the given radius.
DykstraResult DykstraProject(const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& constraints,
                             const Eigen::VectorXd& rhs, double radius,
                             double tolerance = 1e-13,
                             int max_sweeps = 10000);

struct CyclicProjectionResult {
  Eigen::VectorXd point;
  // max(0, max_i (A_i y - b_i), ||y|| - radius) at the returned point.
  double residual = 0.0;
  int sweeps = 0;
  bool feasible = false;
};

// Plain cyclic (alternating) projections onto the halfspaces and the ball,
// starting at `start`. Declares feasibility once the residual drops below
// `tolerance`.
CyclicProjectionResult CyclicProjections(const Eigen::VectorXd& start,
                                         const Eigen::MatrixXd& constraints,
                                         const Eigen::VectorXd& rhs,
                                         double radius, double tolerance,
                                         int max_sweeps);

}  // namespace trsketch

#endif  // TRSKETCH_PROJECTIONS_H_
