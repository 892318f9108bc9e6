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

#ifndef TRSKETCH_LINALG_H_
#define TRSKETCH_LINALG_H_

#include <cstdint>

#include "Eigen/Core"

namespace trsketch {

struct PowerIterationOptions {
  double relative_tolerance = 1e-8;
  int max_iterations = 10000;
  uint64_t seed = 0x5eed5eedULL;
};

struct SpectralNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest |eigenvalue| of a symmetric matrix by power iteration on ||M v||.
// Only the top value is computed (no deflation). After the iteration cap the
// current estimate is returned with `converged == false`.
SpectralNormResult SymmetricSpectralNorm(
    const Eigen::MatrixXd& symmetric,
    const PowerIterationOptions& options = {});

// Spectral norm of a general matrix through the smaller Gram matrix.
double SpectralNorm(const Eigen::MatrixXd& matrix);

Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& matrix);

// Random n x k matrix with orthonormal columns (Householder QR of a Gaussian
// draw).
Eigen::MatrixXd RandomOrthonormalColumns(int n, int k, uint64_t seed);

bool AllFinite(const Eigen::MatrixXd& matrix);

}  // namespace trsketch

#endif  // TRSKETCH_LINALG_H_
