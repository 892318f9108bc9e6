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

#include "trsketch/linalg.h"

#include <algorithm>
#include <cmath>

#include "Eigen/Eigenvalues"
#include "Eigen/QR"
#include "trsketch/rng.h"

namespace trsketch {

SpectralNormResult SymmetricSpectralNorm(const Eigen::MatrixXd& symmetric,
                                         const PowerIterationOptions& options) {
  SpectralNormResult result;
  const int n = static_cast<int>(symmetric.rows());
  if (n == 0) {
    result.converged = true;
    return result;
  }
  if (n == 1) {
    result.value = std::abs(symmetric(0, 0));
    result.converged = true;
    return result;
  }
  Rng rng(options.seed);
  Eigen::VectorXd v = rng.UnitSphere(n);
  double estimate = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd w = symmetric * v;
    const double next = w.norm();
    result.iterations = it;
    if (next == 0.0) {
      // v is in the kernel; a fresh direction decides whether M is zero.
      if (symmetric.cwiseAbs().maxCoeff() == 0.0) {
        result.value = 0.0;
        result.converged = true;
        return result;
      }
      v = rng.UnitSphere(n);
      continue;
    }
    const double change = std::abs(next - estimate);
    estimate = next;
    v = w / next;
    // Values at rounding level carry no relative precision.
    if (it > 1 && (change <= options.relative_tolerance * estimate ||
                   estimate < 1e-14)) {
      result.value = estimate;
      result.converged = true;
      return result;
    }
  }
  result.value = estimate;
  result.converged = false;
  return result;
}

double SpectralNorm(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return 0.0;
  const Eigen::MatrixXd gram = matrix.rows() <= matrix.cols()
                                   ? Eigen::MatrixXd(matrix * matrix.transpose())
                                   : Eigen::MatrixXd(matrix.transpose() * matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& matrix) {
  return 0.5 * (matrix + matrix.transpose());
}

Eigen::MatrixXd RandomOrthonormalColumns(int n, int k, uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd gaussian = rng.GaussianMatrix(n, k);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  // Positive diagonal of R.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

bool AllFinite(const Eigen::MatrixXd& matrix) {
  return matrix.allFinite();
}

}  // namespace trsketch
