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

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "Eigen/QR"
#include "fmt/format.h"
#include "solver_internal.h"
#include "trsketch/errors.h"
#include "trsketch/linalg.h"
#include "trsketch/min_norm_qp.h"
#include "trsketch/projections.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

constexpr int kMaxGridDim = 3;
constexpr int kPolishCandidates = 10;
constexpr int kPolishSteps = 500;

bool Feasible(const ProblemView& problem, const Eigen::VectorXd& x,
              double tol) {
  return problem.LinearViolation(x) <= tol && problem.BallViolation(x) <= tol;
}

Eigen::VectorXd Polish(const ProblemView& problem, const Eigen::VectorXd& start,
                       double step) {
  const int m = problem.num_constraints();
  Eigen::VectorXd x = start;
  double value = problem.Objective(x);
  for (int k = 0; k < kPolishSteps; ++k) {
    const Eigen::VectorXd target = x - step * problem.Gradient(x);
    Eigen::VectorXd next =
        m > 0 ? DykstraProject(target, *problem.constraints, *problem.rhs,
                               problem.radius)
                    .point
              : ProjectOntoBall(target, problem.radius);
    if (!Feasible(problem, next, 1e-12)) break;
    const double next_value = problem.Objective(next);
    if (next_value > value) break;
    const bool stalled = (next - x).cwiseAbs().maxCoeff() < 1e-15;
    x = std::move(next);
    value = next_value;
    if (stalled) break;
  }
  return x;
}

}  // namespace

SolveReport SolveOracleSmall(const ProblemView& problem, double grid_step) {
  internal::Stopwatch clock;
  const int n = problem.dim();
  const int m = problem.num_constraints();
  if (n > kMaxGridDim) {
    throw Error(ErrorCode::kInvalidDimension,
                fmt::format("grid oracle refuses dimension {} > {}", n,
                            kMaxGridDim));
  }
  if (!(grid_step >= 1e-3 && grid_step <= 0.1)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("grid_step must lie in [1e-3, 0.1], got {}",
                            grid_step));
  }
  const double radius = problem.radius;
  const int per_axis =
      static_cast<int>(std::floor(2.0 * radius / grid_step + 1e-9)) + 1;

  double lipschitz_q = 0.0;
  if (problem.has_quadratic()) {
    lipschitz_q = 2.0 * SpectralNorm(*problem.quadratic);
  }
  const double norm_c = problem.linear->norm();
  const double step = lipschitz_q > 0.0 ? 1.0 / lipschitz_q
                      : norm_c > 0.0    ? radius / norm_c
                                        : 1.0;

  // Best few feasible grid points, sorted by objective.
  std::vector<std::pair<double, Eigen::VectorXd>> best;
  long long evaluated = 0;
  long long feasible = 0;
  Eigen::VectorXd point(n);
  std::vector<int> index(n, 0);
  while (n > 0) {
    for (int i = 0; i < n; ++i) point(i) = -radius + index[i] * grid_step;
    ++evaluated;
    if (Feasible(problem, point, 1e-12)) {
      ++feasible;
      const double value = problem.Objective(point);
      if (static_cast<int>(best.size()) < kPolishCandidates ||
          value < best.back().first) {
        if (static_cast<int>(best.size()) == kPolishCandidates) best.pop_back();
        auto it = std::upper_bound(
            best.begin(), best.end(), value,
            [](double v, const auto& entry) { return v < entry.first; });
        best.insert(it, {value, point});
      }
    }
    int axis = 0;
    while (axis < n && ++index[axis] == per_axis) index[axis++] = 0;
    if (axis == n) break;
  }

  SolveReport report;
  report.iterations =
      static_cast<int>(std::min<long long>(evaluated, 1LL << 30));
  if (best.empty()) {
    Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
    bool nonempty = m == 0;
    if (m > 0) {
      const InequalityQpResult closest =
          MinNormPoint(*problem.constraints, *problem.rhs);
      if (closest.feasible && closest.x.norm() <= radius * (1.0 + 1e-12)) {
        start = ProjectOntoBall(closest.x, radius);
        nonempty = true;
      }
    }
    if (!nonempty) {
      report.solution = start;
      report.status = SolveStatus::kInfeasible;
      report.log.push_back(
          "no feasible grid point and the feasible set is empty");
      internal::FinalizeReport(problem, report);
      report.wall_time = clock.Seconds();
      return report;
    }
    report.log.push_back("no feasible grid point; polishing the min-norm point");
    best.push_back({problem.Objective(start), start});
  }

  Eigen::VectorXd winner = best.front().second;
  double winner_value = best.front().first;
  for (const auto& [value, candidate] : best) {
    const Eigen::VectorXd polished = Polish(problem, candidate, step);
    const double polished_value = problem.Objective(polished);
    if (polished_value < winner_value) {
      winner = polished;
      winner_value = polished_value;
    }
  }

  // Exact face solve, kept when it certifies a point at least as good.
  std::vector<int> active;
  if (m > 0) {
    const Eigen::VectorXd slack = *problem.rhs - *problem.constraints * winner;
    for (int i = 0; i < m; ++i) {
      if (slack(i) < 1e-7) active.push_back(i);
    }
  }
  report.solution = winner;
  report.multipliers = Eigen::VectorXd::Zero(m);
  {
    // Least-squares multipliers on the active rows and the ball, clamped at 0.
    const bool ball_active = winner.norm() >= radius * (1.0 - 1e-7);
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd system(n, k + (ball_active ? 1 : 0));
    for (int i = 0; i < k; ++i) {
      system.col(i) = problem.constraints->row(active[i]).transpose();
    }
    if (ball_active) system.col(k) = winner;
    if (system.cols() > 0) {
      const Eigen::VectorXd duals =
          system.completeOrthogonalDecomposition().solve(
              -problem.Gradient(winner));
      for (int i = 0; i < k; ++i) {
        report.multipliers(active[i]) = std::max(0.0, duals(i));
      }
      if (ball_active) report.ball_multiplier = std::max(0.0, duals(k));
    }
  }
  if (std::optional<internal::FacePoint> face =
          internal::SolveOnFace(problem, active)) {
    const double residual =
        EvaluateKkt(problem, face->x, face->multipliers, face->ball_multiplier)
            .Max();
    if (residual <= 1e-8 && problem.Objective(face->x) <= winner_value + 1e-9) {
      report.solution = face->x;
      report.multipliers = face->multipliers;
      report.ball_multiplier = face->ball_multiplier;
    }
  }
  {
    const internal::FacePoint newton = internal::NewtonOnFace(
        problem, report.solution, report.multipliers, active,
        report.solution.norm() >= radius * (1.0 - 1e-7));
    if (newton.x.allFinite() &&
        EvaluateKkt(problem, newton.x, newton.multipliers,
                    newton.ball_multiplier)
                .Max() <= 1e-10 &&
        problem.Objective(newton.x) <= problem.Objective(report.solution) + 1e-12) {
      report.solution = newton.x;
      report.multipliers = newton.multipliers;
      report.ball_multiplier = newton.ball_multiplier;
    }
  }
  internal::FinalizeReport(problem, report);
  report.status = SolveStatus::kOptimal;
  const double lipschitz = norm_c + lipschitz_q * radius;
  report.log.push_back(fmt::format(
      "{} grid points, {} feasible; accuracy O(h*L) with h={:.3g}, L={:.6g}",
      evaluated, feasible, grid_step, lipschitz));
  report.wall_time = clock.Seconds();
  return report;
}

}  // namespace trsketch
