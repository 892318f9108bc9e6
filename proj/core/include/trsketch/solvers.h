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

#ifndef TRSKETCH_SOLVERS_H_
#define TRSKETCH_SOLVERS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "trsketch/model.h"
#include "trsketch/projector.h"

namespace trsketch {

enum class SolveStatus { kOptimal, kLocalOptimal, kInfeasible, kMaxIter };

std::string_view ToString(SolveStatus status);

struct SolveReport {
  Eigen::VectorXd solution;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kMaxIter;
  double kkt_residual = 0.0;
  double max_linear_violation = 0.0;
  // max(0, ||x|| - radius).
  double ball_violation = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  // Multipliers of A x <= b and of the ball, when the method produces them.
  Eigen::VectorXd multipliers;
  double ball_multiplier = 0.0;
  std::vector<std::string> log;
};

// Components of the KKT conditions of
//   min x^T Q x + c^T x  s.t.  A x <= b, ||x|| <= R
// with Lagrangian f(x) + y^T (A x - b) + mu/2 (||x||^2 - R^2), i.e.
// stationarity 2 Q x + c + A^T y + mu x = 0. Every entry is an inf-norm.
struct KktResiduals {
  double stationarity = 0.0;
  double primal_linear = 0.0;
  double primal_ball = 0.0;
  double dual_sign = 0.0;
  double complementarity = 0.0;

  double Max() const;
};

KktResiduals EvaluateKkt(const ProblemView& problem, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& multipliers,
                         double ball_multiplier);

struct ConvexSolverOptions {
  // Target for the KKT residual, in [1e-10, 1e-2].
  double tolerance = 1e-9;
  int max_outer_iterations = 60;
  int max_inner_iterations = 5000;
  // Dual norm beyond which the augmented-Lagrangian loop gives up and
  // declares the problem infeasible.
  double infeasibility_dual_threshold = 1e8;
};

// Convex model (Q absent or PSD): augmented Lagrangian on A x <= b with an
// accelerated projected-gradient inner loop that projects exactly onto the
// ball, finished by an active-face polish. Infeasibility is certified up
// front by the min-norm point of the polyhedron. Throws kWrongSolver when Q
// has an eigenvalue below -1e-8.
SolveReport SolveConvex(const ProblemView& problem,
                        const ConvexSolverOptions& options = {});

struct LocalSolverOptions {
  // Random starts in the ball, in addition to the structured ones.
  int starts = 8;
  double tolerance = 1e-8;
  uint64_t seed = 1;
  int max_outer_iterations = 40;
  int max_inner_iterations = 3000;
};

// Nonconvex quadratic model: multi-start projected gradient with Armijo
// backtracking (constant 1e-4, step halving) inside an augmented Lagrangian
// for A x <= b. Starts: uniform in the ball, -R c/||c||, and +-R times the
// eigenvector of the smallest eigenvalue of Q. Returns the best
// KKT point found (kLocalOptimal), or the best iterate (kMaxIter).
SolveReport SolveLocal(const ProblemView& problem,
                       const LocalSolverOptions& options = {});

// Global minimizer of x^T Q x + c^T x over ||x|| <= radius through the
// eigendecomposition of Q and a safeguarded Newton/bisection search on the
// secular equation, including the hard case. An empty `quadratic` means Q = 0.
SolveReport SolveBallQp(const Eigen::MatrixXd& quadratic,
                        const Eigen::VectorXd& linear, double radius);

// Brute-force reference for dim <= 3: grid over the bounding cube with the
// given step, then 500 projected-gradient steps (Dykstra projections) from the
// best 10 grid points. Throws kInvalidInput for dim > 3 or a step outside
// [1e-3, 0.1].
SolveReport SolveOracleSmall(const ProblemView& problem, double grid_step);

struct LiftResult {
  Eigen::VectorXd x_hat;
  double linear_violation = 0.0;
  double ball_excess = 0.0;
  bool feasible = false;
  double objective_in_original = 0.0;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

// x_hat = P^T u checked against the original instance.
LiftResult LiftAndCheck(const TrsInstance& instance, const Projector& projector,
                        const SolveReport& report);

enum class FullnessMethod {
  // Each bisection probe asks whether dist(0, {A x <= b - r ||A_i||}) is at
  // most radius - r, answered exactly by a min-norm QP.
  kMinNormPoint,
  // Each probe runs cyclic projections and declares feasibility when the
  // residual falls below tol/10 within max_sweeps.
  kAlternatingProjections,
};

struct FullnessOptions {
  double tolerance = 1e-9;
  FullnessMethod method = FullnessMethod::kMinNormPoint;
  int max_sweeps = 10000;
};

struct FullnessResult {
  Eigen::VectorXd center;
  double r = 0.0;
  // Largest violation of A center + r ||A_i|| <= b and ||center|| + r <= R.
  double residual = 0.0;
  bool converged = false;
};

// Radius of the largest closed ball inside {A x <= b} intersected with the
// ball of radius problem.radius, by bisection on r in [0, radius]. Rows need
// not be unit; their norms enter the containment test.
FullnessResult Fullness(const ProblemView& problem,
                        const FullnessOptions& options = {});

}  // namespace trsketch

#endif  // TRSKETCH_SOLVERS_H_
