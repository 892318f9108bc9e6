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

#include "trsketch/projections.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace trsketch {
namespace {

double Residual(const Eigen::VectorXd& y, const Eigen::MatrixXd& constraints,
                const Eigen::VectorXd& rhs, double radius) {
  double residual = std::max(0.0, y.norm() - radius);
  if (constraints.rows() > 0) {
    residual = std::max(residual, (constraints * y - rhs).maxCoeff());
  }
  return residual;
}

}  // namespace

Eigen::VectorXd ProjectOntoBall(const Eigen::VectorXd& x, double radius) {
  const double norm = x.norm();
  if (norm <= radius) return x;
  return x * (radius / norm);
}

Eigen::VectorXd ProjectOntoHalfspace(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& a, double beta) {
  const double excess = a.dot(x) - beta;
  const double norm2 = a.squaredNorm();
  if (excess <= 0.0 || norm2 == 0.0) return x;
  return x - (excess / norm2) * a;
}

DykstraResult DykstraProject(const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& constraints,
                             const Eigen::VectorXd& rhs, double radius,
                             double tolerance, int max_sweeps) {
  const int m = static_cast<int>(constraints.rows());
  const int n = static_cast<int>(x.size());
  // One correction vector per set; the ball is set m.
  std::vector<Eigen::VectorXd> corrections(m + 1, Eigen::VectorXd::Zero(n));
  DykstraResult result;
  Eigen::VectorXd y = x;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Eigen::VectorXd previous = y;
    double correction_change = 0.0;
    for (int i = 0; i <= m; ++i) {
      const Eigen::VectorXd shifted = y + corrections[i];
      const Eigen::VectorXd projected =
          i < m ? ProjectOntoHalfspace(shifted, constraints.row(i).transpose(),
                                       rhs(i))
                : ProjectOntoBall(shifted, radius);
      const Eigen::VectorXd next_correction = shifted - projected;
      correction_change = std::max(
          correction_change, (next_correction - corrections[i]).cwiseAbs().maxCoeff());
      corrections[i] = next_correction;
      y = projected;
    }
    result.sweeps = sweep;
    if ((y - previous).cwiseAbs().maxCoeff() <= tolerance &&
        correction_change <= tolerance) {
      result.converged = true;
      break;
    }
  }
  result.point = y;
  return result;
}

CyclicProjectionResult CyclicProjections(const Eigen::VectorXd& start,
                                         const Eigen::MatrixXd& constraints,
                                         const Eigen::VectorXd& rhs,
                                         double radius, double tolerance,
                                         int max_sweeps) {
  CyclicProjectionResult result;
  Eigen::VectorXd y = start;
  const int m = static_cast<int>(constraints.rows());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int i = 0; i < m; ++i) {
      const double norm2 = constraints.row(i).squaredNorm();
      if (norm2 == 0.0) continue;
      const double excess = constraints.row(i).dot(y) - rhs(i);
      if (excess > 0.0) y -= (excess / norm2) * constraints.row(i).transpose();
    }
    y = ProjectOntoBall(y, radius);
    result.sweeps = sweep;
    result.residual = Residual(y, constraints, rhs, radius);
    if (result.residual < tolerance) {
      result.feasible = true;
      break;
    }
  }
  result.point = y;
  return result;
}

}  // namespace trsketch
