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
#include <optional>
#include <set>
#include <vector>

#include "Eigen/QR"
#include "fmt/format.h"
#include "solver_internal.h"
#include "trsketch/errors.h"
#include "trsketch/solvers.h"

namespace trsketch {

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kLocalOptimal:
      return "local-optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kMaxIter:
      return "max-iter";
  }
  return "unknown";
}

double KktResiduals::Max() const {
  return std::max({stationarity, primal_linear, primal_ball, dual_sign,
                   complementarity});
}

KktResiduals EvaluateKkt(const ProblemView& problem, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& multipliers,
                         double ball_multiplier) {
  const int m = problem.num_constraints();
  if (x.size() != problem.dim() || multipliers.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "KKT evaluation with mismatched dimensions");
  }
  KktResiduals kkt;
  Eigen::VectorXd stationarity = problem.Gradient(x) + ball_multiplier * x;
  if (m > 0) stationarity += problem.constraints->transpose() * multipliers;
  kkt.stationarity = stationarity.size() ? stationarity.cwiseAbs().maxCoeff() : 0.0;
  kkt.primal_linear = problem.LinearViolation(x);
  const double ball_gap = x.norm() - problem.radius;
  kkt.primal_ball = std::max(0.0, ball_gap);
  kkt.dual_sign = std::max(0.0, -ball_multiplier);
  kkt.complementarity = std::abs(ball_multiplier * ball_gap);
  if (m > 0) {
    kkt.dual_sign = std::max(kkt.dual_sign, -multipliers.minCoeff());
    const Eigen::VectorXd slack = *problem.constraints * x - *problem.rhs;
    kkt.complementarity = std::max(
        kkt.complementarity, multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff());
  }
  return kkt;
}

LiftResult LiftAndCheck(const TrsInstance& instance, const Projector& projector,
                        const SolveReport& report) {
  if (report.solution.size() != projector.d()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("solution has dimension {}, projector has d={}",
                            report.solution.size(), projector.d()));
  }
  if (projector.n() != instance.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("projector has n={}, instance has n={}",
                            projector.n(), instance.n()));
  }
  LiftResult lift;
  lift.x_hat = projector.Lift(report.solution);
  const ProblemView view = instance.View();
  lift.linear_violation = view.LinearViolation(lift.x_hat);
  lift.ball_excess = view.BallViolation(lift.x_hat);
  lift.feasible = lift.linear_violation <= kFeasibilityTolerance &&
                  lift.ball_excess <= kFeasibilityTolerance;
  lift.objective_in_original = view.Objective(lift.x_hat);
  return lift;
}

namespace internal {

void FinalizeReport(const ProblemView& problem, SolveReport& report) {
  report.objective = problem.Objective(report.solution);
  report.max_linear_violation = problem.LinearViolation(report.solution);
  report.ball_violation = problem.BallViolation(report.solution);
  if (report.multipliers.size() != problem.num_constraints()) {
    report.multipliers = Eigen::VectorXd::Zero(problem.num_constraints());
  }
  report.kkt_residual = EvaluateKkt(problem, report.solution, report.multipliers,
                                    report.ball_multiplier)
                            .Max();
}

double EstimateBallMultiplier(const ProblemView& problem,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& multipliers) {
  const double norm = x.norm();
  if (norm < problem.radius * (1.0 - 1e-7) || norm == 0.0) return 0.0;
  Eigen::VectorXd g = problem.Gradient(x);
  if (problem.num_constraints() > 0) {
    g += problem.constraints->transpose() * multipliers;
  }
  return std::max(0.0, -g.dot(x) / (norm * norm));
}

std::optional<FacePoint> SolveOnFace(const ProblemView& problem,
                                     const std::vector<int>& active) {
  const int n = problem.dim();
  const int m = problem.num_constraints();
  const int k = static_cast<int>(active.size());
  const double radius = problem.radius;
  FacePoint face;
  face.multipliers = Eigen::VectorXd::Zero(m);
  const Eigen::MatrixXd zero_q;
  const Eigen::MatrixXd& q = problem.has_quadratic() ? *problem.quadratic : zero_q;

  if (k == 0) {
    const SolveReport ball = SolveBallQp(q, *problem.linear, radius);
    face.x = ball.solution;
    face.ball_multiplier = ball.ball_multiplier;
    return face;
  }

  Eigen::MatrixXd face_rows(k, n);
  Eigen::VectorXd face_rhs(k);
  for (int i = 0; i < k; ++i) {
    face_rows.row(i) = problem.constraints->row(active[i]);
    face_rhs(i) = (*problem.rhs)(active[i]);
  }
  // Columns of Q span range(A_W^T) (first `rank`) and its complement.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(face_rows.transpose());
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd range = basis.leftCols(rank);
  const Eigen::MatrixXd null = basis.rightCols(n - rank);

  // Minimum-norm solution of A_W x = b_W lies in the range.
  const Eigen::MatrixXd reduced_rows = face_rows * range;
  const Eigen::VectorXd w =
      reduced_rows.colPivHouseholderQr().solve(face_rhs);
  const Eigen::VectorXd x0 = range * w;
  const double rhs_scale = 1.0 + face_rhs.cwiseAbs().maxCoeff();
  if ((face_rows * x0 - face_rhs).cwiseAbs().maxCoeff() > 1e-10 * rhs_scale) {
    return std::nullopt;
  }
  const double slack2 = radius * radius - x0.squaredNorm();
  if (slack2 < 0.0) return std::nullopt;

  if (n - rank > 0) {
    Eigen::VectorXd reduced_linear = null.transpose() * *problem.linear;
    Eigen::MatrixXd reduced_q;
    if (problem.has_quadratic()) {
      const Eigen::MatrixXd qn = q * null;
      reduced_q = null.transpose() * qn;
      reduced_q = 0.5 * (reduced_q + reduced_q.transpose()).eval();
      reduced_linear += 2.0 * qn.transpose() * x0;
    }
    const SolveReport ball =
        SolveBallQp(reduced_q, reduced_linear, std::sqrt(slack2));
    face.x = x0 + null * ball.solution;
    face.ball_multiplier = ball.ball_multiplier;
  } else {
    face.x = x0;
    face.ball_multiplier = 0.0;
  }

  const Eigen::VectorXd gradient = problem.Gradient(face.x);
  const bool ball_active = face.x.norm() >= radius * (1.0 - 1e-9);
  Eigen::VectorXd face_multipliers;
  if (n - rank == 0 && ball_active) {
    Eigen::MatrixXd system(n, k + 1);
    system.leftCols(k) = face_rows.transpose();
    system.col(k) = face.x;
    const Eigen::VectorXd solution =
        system.completeOrthogonalDecomposition().solve(-gradient);
    face_multipliers = solution.head(k);
    face.ball_multiplier = solution(k);
  } else {
    const Eigen::VectorXd target = -(gradient + face.ball_multiplier * face.x);
    face_multipliers =
        face_rows.transpose().completeOrthogonalDecomposition().solve(target);
  }
  for (int i = 0; i < k; ++i) face.multipliers(active[i]) = face_multipliers(i);
  return face;
}

std::vector<std::vector<int>> CandidateActiveSets(
    const ProblemView& problem, const Eigen::VectorXd& x,
    const Eigen::VectorXd& multipliers) {
  const int m = problem.num_constraints();
  std::vector<std::vector<int>> candidates;
  if (m == 0) {
    candidates.push_back({});
    return candidates;
  }
  const Eigen::VectorXd slack = *problem.rhs - *problem.constraints * x;
  const double y_scale = std::max(1.0, multipliers.cwiseAbs().maxCoeff());
  std::set<std::vector<int>> seen;
  auto add = [&](auto predicate) {
    std::vector<int> set;
    for (int i = 0; i < m; ++i) {
      if (predicate(i)) set.push_back(i);
    }
    if (static_cast<int>(set.size()) <= problem.dim() && seen.insert(set).second) {
      candidates.push_back(std::move(set));
    }
  };
  add([&](int i) { return multipliers(i) > 1e-8 * y_scale; });
  add([&](int i) { return multipliers(i) > 1e-8 * y_scale || slack(i) < 1e-7; });
  add([&](int i) { return multipliers(i) > 1e-5 * y_scale; });
  add([&](int i) { return slack(i) < 1e-6; });
  return candidates;
}

FacePoint NewtonOnFace(const ProblemView& problem, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& multipliers,
                       const std::vector<int>& active, bool ball_active) {
  const int n = problem.dim();
  const int k = static_cast<int>(active.size());
  const int size = n + k + (ball_active ? 1 : 0);
  Eigen::MatrixXd face_rows(k, n);
  Eigen::VectorXd face_rhs(k);
  Eigen::VectorXd z(size);
  z.head(n) = x;
  for (int i = 0; i < k; ++i) {
    face_rows.row(i) = problem.constraints->row(active[i]);
    face_rhs(i) = (*problem.rhs)(active[i]);
    z(n + i) = multipliers(active[i]);
  }
  if (ball_active) z(n + k) = EstimateBallMultiplier(problem, x, multipliers);
  Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(n, n);
  if (problem.has_quadratic()) {
    hessian = *problem.quadratic + problem.quadratic->transpose();
  }

  Eigen::VectorXd residual(size);
  Eigen::MatrixXd jacobian = Eigen::MatrixXd::Zero(size, size);
  for (int iteration = 0; iteration < 30; ++iteration) {
    const Eigen::VectorXd point = z.head(n);
    const double mu = ball_active ? z(n + k) : 0.0;
    residual.head(n) = problem.Gradient(point) + face_rows.transpose() * z.segment(n, k);
    if (ball_active) residual.head(n) += mu * point;
    residual.segment(n, k) = face_rows * point - face_rhs;
    if (ball_active) {
      residual(n + k) =
          0.5 * (point.squaredNorm() - problem.radius * problem.radius);
    }
    if (residual.cwiseAbs().maxCoeff() <= 1e-15) break;
    jacobian.topLeftCorner(n, n) = hessian;
    jacobian.topLeftCorner(n, n).diagonal().array() += mu;
    jacobian.block(0, n, n, k) = face_rows.transpose();
    jacobian.block(n, 0, k, n) = face_rows;
    if (ball_active) {
      jacobian.block(0, n + k, n, 1) = point;
      jacobian.block(n + k, 0, 1, n) = point.transpose();
    }
    const Eigen::VectorXd step =
        jacobian.completeOrthogonalDecomposition().solve(-residual);
    z += step;
    if (step.cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + z.cwiseAbs().maxCoeff())) {
      break;
    }
  }
  FacePoint face;
  face.x = z.head(n);
  face.multipliers = Eigen::VectorXd::Zero(problem.num_constraints());
  for (int i = 0; i < k; ++i) face.multipliers(active[i]) = z(n + i);
  face.ball_multiplier = ball_active ? z(n + k) : 0.0;
  return face;
}

std::optional<FacePoint> PolishOnFaces(const ProblemView& problem,
                                       const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& multipliers,
                                       double tolerance) {
  auto residual = [&](const FacePoint& face) {
    return EvaluateKkt(problem, face.x, face.multipliers, face.ball_multiplier)
        .Max();
  };
  const bool near_sphere = x.norm() >= problem.radius * (1.0 - 1e-6);
  for (const std::vector<int>& active :
       CandidateActiveSets(problem, x, multipliers)) {
    if (std::optional<FacePoint> face = SolveOnFace(problem, active)) {
      if (residual(*face) <= tolerance) return face;
    }
    const FacePoint newton =
        NewtonOnFace(problem, x, multipliers, active, near_sphere);
    if (newton.x.allFinite() && residual(newton) <= tolerance) return newton;
  }
  return std::nullopt;
}

Eigen::VectorXd AugmentedGradient(const ProblemView& problem,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& multipliers,
                                  double rho) {
  Eigen::VectorXd gradient = problem.Gradient(x);
  if (problem.num_constraints() > 0) {
    const Eigen::VectorXd shifted =
        (multipliers + rho * (*problem.constraints * x - *problem.rhs))
            .cwiseMax(0.0);
    gradient += problem.constraints->transpose() * shifted;
  }
  return gradient;
}

double AugmentedValue(const ProblemView& problem, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& multipliers, double rho) {
  double value = problem.Objective(x);
  if (problem.num_constraints() > 0) {
    const Eigen::VectorXd shifted =
        (multipliers + rho * (*problem.constraints * x - *problem.rhs))
            .cwiseMax(0.0);
    value += (shifted.squaredNorm() - multipliers.squaredNorm()) / (2.0 * rho);
  }
  return value;
}

}  // namespace internal
}  // namespace trsketch
