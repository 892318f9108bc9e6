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

#ifndef TRSKETCH_SRC_SOLVER_INTERNAL_H_
#define TRSKETCH_SRC_SOLVER_INTERNAL_H_

#include <chrono>
#include <optional>
#include <vector>

#include "Eigen/Core"
#include "trsketch/model.h"
#include "trsketch/solvers.h"

namespace trsketch::internal {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Fills objective, violations and the KKT residual of `report` from its
// solution and multipliers.
void FinalizeReport(const ProblemView& problem, SolveReport& report);

// Ball multiplier implied by (x, y): nonzero only when the ball is active.
double EstimateBallMultiplier(const ProblemView& problem,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& multipliers);

struct FacePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;
  double ball_multiplier = 0.0;
};

// Minimizes the model over {A_W x = b_W, ||x|| <= R} exactly (nullspace
// reduction plus the ball-constrained QP) and recovers multipliers by least
// squares. Returns nullopt when the face is empty or inconsistent.
std::optional<FacePoint> SolveOnFace(const ProblemView& problem,
                                     const std::vector<int>& active);

// Candidate active sets derived from an approximate primal-dual pair.
std::vector<std::vector<int>> CandidateActiveSets(
    const ProblemView& problem, const Eigen::VectorXd& x,
    const Eigen::VectorXd& multipliers);

// Tries the candidate faces and returns the first point whose KKT residual
// is within `tolerance`, or the face point with the best objective among
// feasible ones when `accept_any_feasible` is set.
// Newton iteration on the KKT system of the face {A_W x = b_W} (and the
// sphere when ball_active), started from (x, multipliers).
FacePoint NewtonOnFace(const ProblemView& problem, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& multipliers,
                       const std::vector<int>& active, bool ball_active);

std::optional<FacePoint> PolishOnFaces(const ProblemView& problem,
                                       const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& multipliers,
                                       double tolerance);

// Augmented-Lagrangian penalty gradient: grad f + A^T max(0, y + rho (Ax - b)).
Eigen::VectorXd AugmentedGradient(const ProblemView& problem,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& multipliers,
                                  double rho);

double AugmentedValue(const ProblemView& problem, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& multipliers, double rho);

}  // namespace trsketch::internal

#endif  // TRSKETCH_SRC_SOLVER_INTERNAL_H_
