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

#include "trsketch/rng.h"

#include <cmath>
#include <numbers>

namespace trsketch {

uint64_t SplitMix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t DeriveSeed(uint64_t master, uint64_t stream) {
  uint64_t state = master;
  const uint64_t mixed_master = SplitMix64(state);
  uint64_t child = mixed_master ^ (stream * 0xd1342543de82ef95ULL + 1);
  return SplitMix64(child);
}

Rng::Rng(uint64_t seed) : engine_(seed) {}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - Uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd Rng::GaussianVector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = Gaussian();
  return v;
}

Eigen::MatrixXd Rng::GaussianMatrix(int rows, int cols, double stddev) {
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill order is part of the reproducibility contract.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = stddev * Gaussian();
  }
  return m;
}

Eigen::VectorXd Rng::UnitSphere(int n) {
  while (true) {
    Eigen::VectorXd v = GaussianVector(n);
    const double norm = v.norm();
    if (norm > 1e-300) return v / norm;
  }
}

Eigen::VectorXd Rng::InBall(int n, double radius) {
  const Eigen::VectorXd direction = UnitSphere(n);
  return radius * std::pow(Uniform(), 1.0 / n) * direction;
}

}  // namespace trsketch
