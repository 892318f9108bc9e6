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

#include "Eigen/Eigenvalues"
#include "fmt/format.h"
#include "solver_internal.h"
#include "trsketch/errors.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

// ||x(nu)||^2 with x(nu) = -sum_i g_i / (lambda_i + nu) v_i, skipping `skip`
// leading components.
double SquaredNorm(const Eigen::VectorXd& lambda, const Eigen::VectorXd& g,
                   double nu, int skip) {
  double total = 0.0;
  for (int i = skip; i < lambda.size(); ++i) {
    const double t = g(i) / (lambda(i) + nu);
    total += t * t;
  }
  return total;
}

double SquaredNormDerivative(const Eigen::VectorXd& lambda,
                             const Eigen::VectorXd& g, double nu) {
  double total = 0.0;
  for (int i = 0; i < lambda.size(); ++i) {
    const double t = lambda(i) + nu;
    total += -2.0 * g(i) * g(i) / (t * t * t);
  }
  return total;
}

Eigen::VectorXd Assemble(const Eigen::MatrixXd& vectors,
                         const Eigen::VectorXd& lambda,
                         const Eigen::VectorXd& g, double nu, int skip) {
  Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(lambda.size());
  for (int i = skip; i < lambda.size(); ++i) {
    coefficients(i) = -g(i) / (lambda(i) + nu);
  }
  return vectors * coefficients;
}

// Largest nu in [lo, hi] with ||x(nu)|| = radius; the norm is decreasing.
double SolveSecular(const Eigen::VectorXd& lambda, const Eigen::VectorXd& g,
                    double radius, double lo, double hi, int& iterations) {
  double nu = hi;
  for (iterations = 0; iterations < 500; ++iterations) {
    const double s2 = SquaredNorm(lambda, g, nu, 0);
    const double s = std::sqrt(s2);
    const double phi = 1.0 / s - 1.0 / radius;
    if (std::abs(s - radius) <= 1e-15 * radius) break;
    if (phi > 0.0) {
      hi = nu;
    } else {
      lo = nu;
    }
    // d(1/s)/dnu = -(ds2/dnu) / (2 s^3)
    const double dphi = -SquaredNormDerivative(lambda, g, nu) / (2.0 * s2 * s);
    double next = nu - phi / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(hi))) break;
    nu = next;
  }
  return nu;
}

}  // namespace

SolveReport SolveBallQp(const Eigen::MatrixXd& quadratic,
                        const Eigen::VectorXd& linear, double radius) {
  internal::Stopwatch clock;
  const int n = static_cast<int>(linear.size());
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("ball radius must be positive, got {}", radius));
  }
  const bool zero_quadratic = quadratic.size() == 0 || quadratic.isZero(0.0);
  if (!zero_quadratic && (quadratic.rows() != n || quadratic.cols() != n)) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("quadratic is {}x{}, linear term has size {}",
                            quadratic.rows(), quadratic.cols(), n));
  }

  SolveReport report;
  report.status = SolveStatus::kOptimal;
  report.multipliers = Eigen::VectorXd::Zero(0);
  const double norm_c = linear.norm();

  if (zero_quadratic || n == 0) {
    if (norm_c == 0.0) {
      report.solution = Eigen::VectorXd::Zero(n);
    } else {
      report.solution = -radius * linear / norm_c;
      report.ball_multiplier = norm_c / radius;
    }
  } else {
    const Eigen::MatrixXd hessian = quadratic + quadratic.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(hessian);
    const Eigen::VectorXd& lambda = eigen.eigenvalues();
    const Eigen::MatrixXd& vectors = eigen.eigenvectors();
    const Eigen::VectorXd g = vectors.transpose() * linear;
    const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
    const double eig_tol = 1e-12 * scale;
    const double g_tol = 1e-13 * std::max(norm_c, 1e-300);
    const double lambda_min = lambda(0);

    // Leading eigenspace of the smallest eigenvalue.
    int lead = 0;
    while (lead < n && lambda(lead) <= lambda_min + eig_tol) ++lead;
    bool lead_orthogonal = true;
    for (int i = 0; i < lead; ++i) {
      if (std::abs(g(i)) > g_tol) lead_orthogonal = false;
    }

    bool done = false;
    if (lambda_min > eig_tol) {
      const Eigen::VectorXd x = Assemble(vectors, lambda, g, 0.0, 0);
      if (x.norm() <= radius) {
        report.solution = x;
        done = true;
      }
    } else if (lambda_min >= -eig_tol && lead_orthogonal) {
      // Singular PSD Hessian with c in its range: pseudo-inverse point.
      const Eigen::VectorXd x = Assemble(vectors, lambda, g, 0.0, lead);
      if (x.norm() <= radius) {
        report.solution = x;
        done = true;
      }
    }

    if (!done) {
      const double lo = std::max(0.0, -lambda_min);
      const double partial =
          lead_orthogonal ? SquaredNorm(lambda, g, lo, lead) : 0.0;
      if (lead_orthogonal && partial <= radius * radius) {
        // Hard case.
        Eigen::VectorXd x = Assemble(vectors, lambda, g, lo, lead);
        Eigen::VectorXd v = vectors.col(0);
        for (int i = 0; i < n; ++i) {
          if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0.0) v = -v;
            break;
          }
        }
        const double tau = std::sqrt(std::max(0.0, radius * radius - partial));
        report.solution = x + tau * v;
        report.ball_multiplier = lo;
        report.log.push_back(fmt::format("hard case, tau={:.6g}", tau));
      } else {
        const double hi = lo + norm_c / radius + std::abs(lambda_min) + 1.0;
        int iterations = 0;
        const double nu = SolveSecular(lambda, g, radius, lo, hi, iterations);
        report.iterations = iterations;
        report.solution = Assemble(vectors, lambda, g, nu, 0);
        // Snap to the sphere to remove rounding drift.
        const double norm = report.solution.norm();
        if (norm > 0.0) report.solution *= radius / norm;
        report.ball_multiplier = nu;
      }
    }
  }

  const Eigen::MatrixXd empty_rows(0, n);
  const Eigen::VectorXd empty_rhs(0);
  ProblemView view;
  view.quadratic = zero_quadratic ? nullptr : &quadratic;
  view.linear = &linear;
  view.constraints = &empty_rows;
  view.rhs = &empty_rhs;
  view.radius = radius;
  internal::FinalizeReport(view, report);
  report.wall_time = clock.Seconds();
  return report;
}

}  // namespace trsketch
