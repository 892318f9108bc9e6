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
#include "trsketch/rng.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

constexpr double kArmijo = 1e-4;

struct Candidate {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;
  double ball_multiplier = 0.0;
  int iterations = 0;
};

Candidate Descend(const ProblemView& problem, const Eigen::VectorXd& start,
                  double lipschitz_q, double a_norm2,
                  const LocalSolverOptions& options) {
  const int m = problem.num_constraints();
  const double radius = problem.radius;
  Candidate result;
  Eigen::VectorXd x = ProjectOntoBall(start, radius);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double rho = 1.0;
  double previous_violation = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    const double inner_tol =
        std::max(0.1 * options.tolerance, std::pow(0.1, outer + 2));
    const double reference = lipschitz_q + rho * a_norm2 + 1e-12;
    double step = 1.0 / reference;
    for (int inner = 0; inner < options.max_inner_iterations; ++inner) {
      ++result.iterations;
      const Eigen::VectorXd gradient =
          internal::AugmentedGradient(problem, x, y, rho);
      const double mapping =
          reference *
          (x - ProjectOntoBall(x - gradient / reference, radius))
              .cwiseAbs()
              .maxCoeff();
      if (mapping <= inner_tol) break;
      const double value = internal::AugmentedValue(problem, x, y, rho);
      Eigen::VectorXd next;
      while (true) {
        next = ProjectOntoBall(x - step * gradient, radius);
        const double decrease = gradient.dot(next - x);
        if (internal::AugmentedValue(problem, next, y, rho) <=
                value + kArmijo * decrease ||
            step < 1e-20) {
          break;
        }
        step *= 0.5;
      }
      x = next;
      step = std::min(2.0 * step, 8.0 / reference);
    }

    double violation = 0.0;
    if (m > 0) {
      const Eigen::VectorXd residual = *problem.constraints * x - *problem.rhs;
      y = (y + rho * residual).cwiseMax(0.0);
      violation = std::max(0.0, residual.maxCoeff());
    }
    const double mu = internal::EstimateBallMultiplier(problem, x, y);
    if (EvaluateKkt(problem, x, y, mu).Max() <= options.tolerance) {
      result.x = x;
      result.multipliers = y;
      result.ball_multiplier = mu;
      return result;
    }
    if (violation < 1e-6) {
      if (std::optional<internal::FacePoint> face =
              internal::PolishOnFaces(problem, x, y, options.tolerance)) {
        result.x = face->x;
        result.multipliers = face->multipliers;
        result.ball_multiplier = face->ball_multiplier;
        return result;
      }
    }
    if (violation > 0.25 * previous_violation) rho = std::min(rho * 10.0, 1e10);
    previous_violation = violation;
  }
  result.x = x;
  result.multipliers = y;
  result.ball_multiplier = internal::EstimateBallMultiplier(problem, x, y);
  return result;
}

}  // namespace

SolveReport SolveLocal(const ProblemView& problem,
                       const LocalSolverOptions& options) {
  internal::Stopwatch clock;
  if (!problem.has_quadratic()) {
    throw Error(ErrorCode::kInvalidInput,
                "local solver needs a quadratic term");
  }
  if (options.starts < 1) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("starts must be at least 1, got {}", options.starts));
  }
  const int n = problem.dim();
  const int m = problem.num_constraints();
  const double radius = problem.radius;

  if (m > 0) {
    const InequalityQpResult closest =
        MinNormPoint(*problem.constraints, *problem.rhs);
    if (!closest.feasible || closest.x.norm() > radius * (1.0 + 1e-12)) {
      SolveReport report;
      report.status = SolveStatus::kInfeasible;
      report.solution = closest.feasible ? ProjectOntoBall(closest.x, radius)
                                         : Eigen::VectorXd::Zero(n);
      report.log.push_back("feasible set is empty");
      internal::FinalizeReport(problem, report);
      report.wall_time = clock.Seconds();
      return report;
    }
  }

  const Eigen::MatrixXd q = Symmetrize(*problem.quadratic);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(q);
  const double lipschitz_q = 2.0 * eigen.eigenvalues().cwiseAbs().maxCoeff();
  const double a_norm2 =
      m > 0 ? std::pow(SpectralNorm(*problem.constraints), 2) : 0.0;

  std::vector<Eigen::VectorXd> starts;
  const double norm_c = problem.linear->norm();
  if (norm_c > 0.0) starts.push_back(-radius * *problem.linear / norm_c);
  const Eigen::VectorXd bottom = eigen.eigenvectors().col(0);
  starts.push_back(radius * bottom);
  starts.push_back(-radius * bottom);
  Rng rng(options.seed);
  for (int i = 0; i < options.starts; ++i) starts.push_back(rng.InBall(n, radius));

  SolveReport best;
  bool have_best = false;
  int total_iterations = 0;
  for (size_t s = 0; s < starts.size(); ++s) {
    Candidate candidate = Descend(problem, starts[s], lipschitz_q, a_norm2, options);
    total_iterations += candidate.iterations;
    SolveReport report;
    report.solution = std::move(candidate.x);
    report.multipliers = std::move(candidate.multipliers);
    report.ball_multiplier = candidate.ball_multiplier;
    internal::FinalizeReport(problem, report);
    report.status = report.kkt_residual <= options.tolerance
                        ? SolveStatus::kLocalOptimal
                        : SolveStatus::kMaxIter;
    const bool better =
        !have_best ||
        (report.status == SolveStatus::kLocalOptimal &&
         best.status != SolveStatus::kLocalOptimal) ||
        (report.status == best.status && report.objective < best.objective);
    if (better) {
      best = std::move(report);
      have_best = true;
      best.log.clear();
      best.log.push_back(fmt::format("best from start {}", s));
    }
  }
  best.iterations = total_iterations;
  best.log.push_back(fmt::format("{} starts", starts.size()));
  best.wall_time = clock.Seconds();
  return best;
}

}  // namespace trsketch
