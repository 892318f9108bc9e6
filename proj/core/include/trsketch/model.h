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

#ifndef TRSKETCH_MODEL_H_
#define TRSKETCH_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "Eigen/Core"
#include "trsketch/projector.h"

namespace trsketch {

enum class ModelKind { kLinear, kQuadratic };

std::string_view ToString(ModelKind kind);
ModelKind ParseModelKind(std::string_view token);

// Read-only view of
//   min x^T Q x + c^T x  s.t.  A x <= b,  ||x|| <= radius
// shared by original and projected instances. `quadratic` is null for a
// linear model. The viewed objects must outlive the view.
struct ProblemView {
  const Eigen::MatrixXd* quadratic = nullptr;
  const Eigen::VectorXd* linear = nullptr;
  const Eigen::MatrixXd* constraints = nullptr;
  const Eigen::VectorXd* rhs = nullptr;
  double radius = 1.0;

  int dim() const { return static_cast<int>(linear->size()); }
  int num_constraints() const { return static_cast<int>(constraints->rows()); }
  bool has_quadratic() const { return quadratic != nullptr; }

  double Objective(const Eigen::VectorXd& x) const;
  // 2 Q x + c.
  Eigen::VectorXd Gradient(const Eigen::VectorXd& x) const;
  // max(0, max_i (A_i x - b_i)); 0 when there are no constraints.
  double LinearViolation(const Eigen::VectorXd& x) const;
  double BallViolation(const Eigen::VectorXd& x) const;
};

// Problem data of a trust-region subproblem. Q, when present, is stored
// symmetrized.
struct TrsInstance {
  std::string id;
  std::optional<Eigen::MatrixXd> quadratic;
  Eigen::VectorXd linear;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  double radius = 1.0;
  bool normalized = false;

  int n() const { return static_cast<int>(linear.size()); }
  int m() const { return static_cast<int>(constraints.rows()); }
  ModelKind kind() const {
    return quadratic ? ModelKind::kQuadratic : ModelKind::kLinear;
  }

  ProblemView View() const;
  double Objective(const Eigen::VectorXd& x) const { return View().Objective(x); }

  // Throws kInvalidInstance on inconsistent shapes, non-finite data or a
  // non-positive radius.
  void Validate() const;
};

TrsInstance MakeInstance(std::string id,
                         std::optional<Eigen::MatrixXd> quadratic,
                         Eigen::VectorXd linear, Eigen::MatrixXd constraints,
                         Eigen::VectorXd rhs, double radius = 1.0);

enum class NormalizationStatus { kOk, kDemotedToLinear };

// Maps the normalized instance back to the original one:
//   x = radius_scale * x',
//   A_i = row_scales_i * A'_i,   b_i = row_scales_i * radius_scale * b'_i,
//   f(x) = objective_scale * f'(x').
struct NormalizationRecord {
  Eigen::VectorXd row_scales;
  double radius_scale = 1.0;
  // ||radius^2 Q||_2 (1 for linear models).
  double q_scale = 1.0;
  double objective_scale = 1.0;
  NormalizationStatus status = NormalizationStatus::kOk;
};

struct NormalizedInstance {
  TrsInstance instance;
  NormalizationRecord record;
};

// Rescales to radius 1, unit rows of A and ||Q||_2 = 1. A zero Q is demoted to
// a linear model (status kDemotedToLinear); a zero row of A is an error.
NormalizedInstance Normalize(const TrsInstance& instance);
TrsInstance Denormalize(const TrsInstance& normalized,
                        const NormalizationRecord& record);

// True when radius == 1, rows are unit to 1e-9 and ||Q||_2 == 1 to 1e-6.
bool IsNormalized(const TrsInstance& instance);

struct InstanceStats {
  int rank = 0;
  // sigma_1 >= ... >= sigma_rank > 1e-10 sigma_1.
  Eigen::VectorXd singular_values;
  double nuclear_norm = 0.0;
  double spectral_norm = 0.0;
  double norm_c = 0.0;
};

InstanceStats ComputeInstanceStats(const TrsInstance& instance);

// Singular values in nonincreasing order (symmetric input uses an
// eigendecomposition).
Eigen::VectorXd SingularValues(const Eigen::MatrixXd& matrix);
double NuclearNorm(const Eigen::MatrixXd& matrix);

enum class Signature { kPsd, kIndefinite };

std::string_view ToString(Signature signature);
Signature ParseSignature(std::string_view token);

struct GeneratorOptions {
  int n = 10;
  int m = 5;
  ModelKind kind = ModelKind::kLinear;
  int rank = 1;
  // Every generated S* contains a ball of this radius.
  double fullness_target = 0.1;
  uint64_t seed = 1;
  double norm_c = 1.0;
  Signature signature = Signature::kPsd;
  // b_i = A_i xbar + fullness_target + margin_i, margin_i ~ U[0, margin_scale].
  double margin_scale = 0.25;
};

// Random normalized instance with rows of A uniform on the sphere, an interior
// anchor xbar with ||xbar|| <= 1 - 2 r_min and B(xbar, r_min) inside S*.
// Quadratic models use Q = U diag(sigma) U^T with sigma_1 = 1.
TrsInstance GenerateInstance(const GeneratorOptions& options);

enum class Direction { kMinus, kPlus };

std::string_view ToString(Direction direction);
Direction ParseDirection(std::string_view token);

struct ProjectorRef {
  uint64_t seed = 0;
  ScalingConvention convention = ScalingConvention::kGaussianInvSqrtN;
  int d = 0;
  int n = 0;
};

// Projected problem in dimension d:
//   min u^T (P Q P^T) u + (P c)^T u  s.t.  A P^T u <= b (+ eps),
//   ||u|| <= 1 -/+ eps.
struct ProjectedInstance {
  Direction direction = Direction::kMinus;
  double epsilon = 0.0;
  std::optional<Eigen::MatrixXd> quadratic;
  Eigen::VectorXd linear;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  double ball_radius = 1.0;
  ProjectorRef projector;

  int d() const { return static_cast<int>(linear.size()); }
  ProblemView View() const;
};

// Requires a normalized instance, P.n() == instance.n() and eps in (0, 0.5].
ProjectedInstance BuildProjected(const TrsInstance& instance,
                                 const Projector& projector, double epsilon,
                                 Direction direction);

}  // namespace trsketch

#endif  // TRSKETCH_MODEL_H_
