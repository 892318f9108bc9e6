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

#ifndef TRSKETCH_PROJECTOR_H_
#define TRSKETCH_PROJECTOR_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "trsketch/linalg.h"

namespace trsketch {

// How the entries of a sketching matrix are scaled.
//
// kGaussianInvSqrtN: i.i.d. N(0, 1/n) entries, so P P^T ~ I_d but
//   ||P x||^2 ~ (d/n) ||x||^2.
// kGaussianInvSqrtD: i.i.d. N(0, 1/d) entries, so ||P x||^2 ~ ||x||^2 but
//   P P^T ~ (n/d) I_d.
// kOrthonormalRows: a Gaussian draw with orthonormalized rows, P P^T = I_d.
//
// No single scaling gives both norm preservation and P P^T ~ I when d << n;
// every experiment therefore names its convention explicitly.
enum class ScalingConvention {
  kGaussianInvSqrtN,
  kGaussianInvSqrtD,
  kOrthonormalRows,
};

// Tokens: "inv-sqrt-n", "inv-sqrt-d", "orthonormal-rows".
std::string_view ToString(ScalingConvention convention);
ScalingConvention ParseScalingConvention(std::string_view token);

class Projector {
 public:
  // Draws a d x n sketch. Deterministic in (n, d, convention, seed).
  static Projector Sample(int n, int d, ScalingConvention convention,
                          uint64_t seed);

  // Wraps explicit entries (fixtures, deserialization). Rows must be
  // orthonormal to 1e-10 when `convention` is kOrthonormalRows.
  Projector(Eigen::MatrixXd entries, ScalingConvention convention,
            uint64_t seed);

  int d() const { return static_cast<int>(entries_.rows()); }
  int n() const { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  ScalingConvention convention() const { return convention_; }
  uint64_t seed() const { return seed_; }

  // P x.
  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  // P^T u.
  Eigen::VectorXd Lift(const Eigen::VectorXd& u) const;

 private:
  Eigen::MatrixXd entries_;
  ScalingConvention convention_;
  uint64_t seed_;
};

// ||P P^T - I_d||_2 by symmetric power iteration (relative tolerance 1e-8,
// at most 1e4 iterations).
SpectralNormResult GramDeviation(const Projector& projector);

struct PropertyCheckReport {
  int trials = 0;
  int satisfied = 0;
  double fraction = 0.0;
  double epsilon = 0.0;
  // Largest observed relative deviation, in the units of the checked
  // inequality (e.g. | ||Px||^2 - ||x||^2 | / ||x||^2 for norms).
  double worst_violation = 0.0;
};

using VectorPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

// (1 - eps)||x||^2 <= ||Px||^2 <= (1 + eps)||x||^2. Rejects zero vectors.
PropertyCheckReport CheckNormPreservation(
    const Projector& projector, const std::vector<Eigen::VectorXd>& xs,
    double epsilon);

// |<Px, Py> - <x, y>| <= eps ||x|| ||y||. Rejects zero vectors.
PropertyCheckReport CheckInnerProduct(const Projector& projector,
                                      const std::vector<VectorPair>& pairs,
                                      double epsilon);

// A x - eps||x|| 1 <= A P^T P x <= A x + eps||x|| 1 componentwise, for a
// matrix with unit rows.
PropertyCheckReport CheckLinearMap(const Projector& projector,
                                   const Eigen::MatrixXd& rows,
                                   const std::vector<Eigen::VectorXd>& xs,
                                   double epsilon);

// |x^T P^T P Q P^T P y - x^T Q y| <= 3 eps ||x|| ||y|| ||Q||_*.
PropertyCheckReport CheckQuadraticForm(const Projector& projector,
                                       const Eigen::MatrixXd& quadratic,
                                       const std::vector<VectorPair>& pairs,
                                       double epsilon);

// Unit-sphere samples for the checkers.
std::vector<Eigen::VectorXd> SampleUnitVectors(int n, int count,
                                               uint64_t seed);
std::vector<VectorPair> SampleUnitPairs(int n, int count, uint64_t seed);

// Binary layout (little endian): 32-byte header
//   [0, 8)   magic "TRSKPROJ"
//   [8, 12)  u32 d
//   [12, 16) u32 n
//   [16]     u8 convention tag (0 inv-sqrt-n, 1 inv-sqrt-d, 2 orthonormal)
//   [17, 25) u64 seed
//   [25, 32) zero padding
// followed by d * n float64 entries in row-major order.
void WriteProjector(const Projector& projector, std::ostream& out);
Projector ReadProjector(std::istream& in);
void SaveProjector(const Projector& projector, const std::string& path);
Projector LoadProjector(const std::string& path);

}  // namespace trsketch

#endif  // TRSKETCH_PROJECTOR_H_
