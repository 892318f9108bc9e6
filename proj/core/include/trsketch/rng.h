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

#ifndef TRSKETCH_RNG_H_
#define TRSKETCH_RNG_H_

#include <cstdint>
#include <random>

#include "Eigen/Core"

namespace trsketch {

// One SplitMix64 step: advances `state` and returns the mixed output.
uint64_t SplitMix64(uint64_t& state);

// Deterministic child seed for stream `stream` of `master`. Every trial, and
// every stage inside a trial, draws from its own child.
uint64_t DeriveSeed(uint64_t master, uint64_t stream);

// Seeded generator with a platform-independent Gaussian sampler.
// Gaussians come from an explicit Box-Muller transform rather than
// std::normal_distribution.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Gaussian();

  Eigen::VectorXd GaussianVector(int n);
  Eigen::MatrixXd GaussianMatrix(int rows, int cols, double stddev = 1.0);
  // Uniform on the unit sphere S^{n-1}.
  Eigen::VectorXd UnitSphere(int n);
  // Uniform in the closed ball of the given radius.
  Eigen::VectorXd InBall(int n, double radius);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace trsketch

#endif  // TRSKETCH_RNG_H_
