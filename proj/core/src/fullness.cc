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

#include "fmt/format.h"
#include "trsketch/errors.h"
#include "trsketch/min_norm_qp.h"
#include "trsketch/projections.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

struct Probe {
  bool feasible = false;
  Eigen::VectorXd center;
};

Probe ProbeRadius(const ProblemView& problem, const Eigen::VectorXd& row_norms,
                  double r, const FullnessOptions& options,
                  const Eigen::VectorXd& warm) {
  Probe probe;
  const double shrunk = problem.radius - r;
  if (shrunk < 0.0) return probe;
  const int m = problem.num_constraints();
  if (m == 0) {
    probe.feasible = true;
    probe.center = Eigen::VectorXd::Zero(problem.dim());
    return probe;
  }
  const Eigen::VectorXd rhs = *problem.rhs - r * row_norms;
  if (options.method == FullnessMethod::kMinNormPoint) {
    const InequalityQpResult closest = MinNormPoint(*problem.constraints, rhs);
    if (closest.feasible && closest.x.norm() <= shrunk) {
      probe.feasible = true;
      probe.center = closest.x;
    }
    return probe;
  }
  if (shrunk == 0.0) {
    probe.center = Eigen::VectorXd::Zero(problem.dim());
    probe.feasible = ((*problem.constraints) * probe.center - rhs).maxCoeff() <=
                     options.tolerance / 10.0;
    return probe;
  }
  const CyclicProjectionResult cyclic =
      CyclicProjections(warm, *problem.constraints, rhs, shrunk,
                        options.tolerance / 10.0, options.max_sweeps);
  probe.feasible = cyclic.feasible;
  probe.center = cyclic.point;
  return probe;
}

double Residual(const ProblemView& problem, const Eigen::VectorXd& row_norms,
                const Eigen::VectorXd& center, double r) {
  double residual = std::max(0.0, center.norm() + r - problem.radius);
  if (problem.num_constraints() > 0) {
    residual = std::max(
        residual, ((*problem.constraints) * center + r * row_norms - *problem.rhs)
                      .maxCoeff());
  }
  return residual;
}

}  // namespace

FullnessResult Fullness(const ProblemView& problem,
                        const FullnessOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("tolerance must be positive, got {}",
                            options.tolerance));
  }
  const int n = problem.dim();
  const int m = problem.num_constraints();
  Eigen::VectorXd row_norms(m);
  for (int i = 0; i < m; ++i) row_norms(i) = problem.constraints->row(i).norm();

  FullnessResult result;
  result.center = Eigen::VectorXd::Zero(n);
  const Probe base = ProbeRadius(problem, row_norms, 0.0, options, result.center);
  if (!base.feasible) {
    result.converged = false;
    result.residual = Residual(problem, row_norms, base.center.size() == n
                                                       ? base.center
                                                       : result.center,
                               0.0);
    return result;
  }
  double lo = 0.0;
  double hi = problem.radius;
  Eigen::VectorXd center = base.center;
  const Probe top = ProbeRadius(problem, row_norms, hi, options, center);
  if (top.feasible) {
    lo = hi;
    center = top.center;
  }
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const Probe probe = ProbeRadius(problem, row_norms, mid, options, center);
    if (probe.feasible) {
      lo = mid;
      center = probe.center;
    } else {
      hi = mid;
    }
  }
  result.center = center;
  result.r = lo;
  result.residual = std::max(0.0, Residual(problem, row_norms, center, lo));
  result.converged = true;
  return result;
}

}  // namespace trsketch
