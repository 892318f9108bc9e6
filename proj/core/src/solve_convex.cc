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
#include <limits>
#include <vector>

#include "Eigen/Eigenvalues"
#include "fmt/format.h"
#include "solver_internal.h"
#include "trsketch/errors.h"
#include "trsketch/linalg.h"
#include "trsketch/min_norm_qp.h"
#include "trsketch/projections.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

constexpr double kPsdTolerance = -1e-8;

void RequireConvex(const ProblemView& problem) {
  if (!problem.has_quadratic() || problem.quadratic->size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(
      Symmetrize(*problem.quadratic), Eigen::EigenvaluesOnly);
  const double lambda_min = eigen.eigenvalues()(0);
  if (lambda_min < kPsdTolerance) {
    throw Error(ErrorCode::kWrongSolver,
                fmt::format("quadratic term is indefinite (smallest eigenvalue "
                            "{:.3e}); use the local solver",
                            lambda_min));
  }
}

SolveReport FromFace(const ProblemView& problem,
                     const internal::FacePoint& face) {
  SolveReport report;
  report.solution = face.x;
  report.multipliers = face.multipliers;
  report.ball_multiplier = face.ball_multiplier;
  internal::FinalizeReport(problem, report);
  return report;
}

}  // namespace

SolveReport SolveConvex(const ProblemView& problem,
                        const ConvexSolverOptions& options) {
  internal::Stopwatch clock;
  const double tol = options.tolerance;
  if (!(tol >= 1e-10 && tol <= 1e-2)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("tolerance must lie in [1e-10, 1e-2], got {}", tol));
  }
  RequireConvex(problem);
  const int n = problem.dim();
  const int m = problem.num_constraints();
  const double radius = problem.radius;

  if (m == 0) {
    const Eigen::MatrixXd empty;
    SolveReport report = SolveBallQp(
        problem.has_quadratic() ? *problem.quadratic : empty, *problem.linear,
        radius);
    report.status = report.kkt_residual <= tol ? SolveStatus::kOptimal
                                               : SolveStatus::kMaxIter;
    report.wall_time = clock.Seconds();
    return report;
  }

  const Eigen::MatrixXd& a = *problem.constraints;
  const Eigen::VectorXd& b = *problem.rhs;

  const InequalityQpResult closest = MinNormPoint(a, b);
  if (!closest.feasible || closest.x.norm() > radius * (1.0 + 1e-12)) {
    SolveReport report;
    report.status = SolveStatus::kInfeasible;
    report.solution = closest.feasible ? ProjectOntoBall(closest.x, radius)
                                       : Eigen::VectorXd::Zero(n);
    report.iterations = closest.iterations;
    report.log.push_back(
        closest.feasible
            ? fmt::format("polytope lies at distance {:.6g} > radius {:.6g}",
                          closest.x.norm(), radius)
            : std::string("linear constraints are inconsistent"));
    internal::FinalizeReport(problem, report);
    report.wall_time = clock.Seconds();
    return report;
  }

  const double q_norm =
      problem.has_quadratic() ? SpectralNorm(*problem.quadratic) : 0.0;
  const double a_norm2 = std::pow(SpectralNorm(a), 2);

  Eigen::VectorXd x = ProjectOntoBall(closest.x, radius);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double rho = 1.0;
  double previous_violation = std::numeric_limits<double>::infinity();
  std::vector<int> previous_active;
  SolveReport report;
  int total_inner = 0;

  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    const double lipschitz = 2.0 * q_norm + rho * a_norm2 + 1e-12;
    const double inner_tol = std::max(0.1 * tol, std::pow(0.1, outer + 2));
    Eigen::VectorXd z = x;
    Eigen::VectorXd x_prev = x;
    double t = 1.0;
    for (int inner = 0; inner < options.max_inner_iterations; ++inner) {
      ++total_inner;
      const Eigen::VectorXd gradient =
          internal::AugmentedGradient(problem, z, y, rho);
      const Eigen::VectorXd x_next =
          ProjectOntoBall(z - gradient / lipschitz, radius);
      const double mapping = lipschitz * (x_next - z).cwiseAbs().maxCoeff();
      if ((z - x_next).dot(x_next - x_prev) > 0.0) {
        t = 1.0;
        z = x_next;
      } else {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = x_next + ((t - 1.0) / t_next) * (x_next - x_prev);
        t = t_next;
      }
      x_prev = x_next;
      if (mapping <= inner_tol) break;
    }
    x = x_prev;

    const Eigen::VectorXd residual = a * x - b;
    y = (y + rho * residual).cwiseMax(0.0);
    const double violation = std::max(0.0, residual.maxCoeff());
    const double mu = internal::EstimateBallMultiplier(problem, x, y);
    const double kkt = EvaluateKkt(problem, x, y, mu).Max();
    report.log.push_back(fmt::format(
        "outer {}: rho={:.1e} violation={:.3e} kkt={:.3e}", outer, rho,
        violation, kkt));

    if (kkt <= tol) {
      report.solution = x;
      report.multipliers = y;
      report.ball_multiplier = mu;
      internal::FinalizeReport(problem, report);
      report.status = SolveStatus::kOptimal;
      report.iterations = total_inner;
      report.wall_time = clock.Seconds();
      return report;
    }

    const std::vector<std::vector<int>> candidates =
        internal::CandidateActiveSets(problem, x, y);
    const std::vector<int>& active =
        candidates.empty() ? previous_active : candidates.front();
    if (active != previous_active || violation < 1e-6) {
      if (std::optional<internal::FacePoint> face =
              internal::PolishOnFaces(problem, x, y, tol)) {
        SolveReport polished = FromFace(problem, *face);
        polished.log = std::move(report.log);
        polished.log.push_back(
            fmt::format("face polish accepted at outer {}", outer));
        polished.status = SolveStatus::kOptimal;
        polished.iterations = total_inner;
        polished.wall_time = clock.Seconds();
        return polished;
      }
    }
    previous_active = active;

    if (y.norm() > options.infeasibility_dual_threshold) {
      report.solution = x;
      report.multipliers = y;
      report.ball_multiplier = mu;
      internal::FinalizeReport(problem, report);
      report.status = SolveStatus::kInfeasible;
      report.log.push_back(
          "dual norm exceeded threshold; infeasibility declared heuristically");
      report.iterations = total_inner;
      report.wall_time = clock.Seconds();
      return report;
    }
    if (violation > 0.25 * previous_violation) rho = std::min(rho * 10.0, 1e10);
    previous_violation = violation;
  }

  report.solution = x;
  report.multipliers = y;
  report.ball_multiplier = internal::EstimateBallMultiplier(problem, x, y);
  internal::FinalizeReport(problem, report);
  report.status = SolveStatus::kMaxIter;
  report.iterations = total_inner;
  report.wall_time = clock.Seconds();
  return report;
}

}  // namespace trsketch
