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

#include "trsketch/model.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "Eigen/Eigenvalues"
#include "Eigen/SVD"
#include "fmt/format.h"
#include "trsketch/errors.h"
#include "trsketch/linalg.h"
#include "trsketch/rng.h"

namespace trsketch {
namespace {

bool IsSymmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) return false;
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  return (matrix - matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

}  // namespace

std::string_view ToString(ModelKind kind) {
  return kind == ModelKind::kLinear ? "linear" : "quadratic";
}

ModelKind ParseModelKind(std::string_view token) {
  if (token == "linear") return ModelKind::kLinear;
  if (token == "quadratic") return ModelKind::kQuadratic;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown model '{}' (expected linear or quadratic)",
                          token));
}

std::string_view ToString(Signature signature) {
  return signature == Signature::kPsd ? "psd" : "indefinite";
}

Signature ParseSignature(std::string_view token) {
  if (token == "psd") return Signature::kPsd;
  if (token == "indefinite") return Signature::kIndefinite;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown signature '{}' (expected psd or indefinite)",
                          token));
}

std::string_view ToString(Direction direction) {
  return direction == Direction::kMinus ? "minus" : "plus";
}

Direction ParseDirection(std::string_view token) {
  if (token == "minus") return Direction::kMinus;
  if (token == "plus") return Direction::kPlus;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown direction '{}' (expected minus or plus)",
                          token));
}

double ProblemView::Objective(const Eigen::VectorXd& x) const {
  double value = linear->dot(x);
  if (quadratic != nullptr) value += x.dot(*quadratic * x);
  return value;
}

Eigen::VectorXd ProblemView::Gradient(const Eigen::VectorXd& x) const {
  if (quadratic == nullptr) return *linear;
  return 2.0 * (*quadratic * x) + *linear;
}

double ProblemView::LinearViolation(const Eigen::VectorXd& x) const {
  if (constraints->rows() == 0) return 0.0;
  return std::max(0.0, (*constraints * x - *rhs).maxCoeff());
}

double ProblemView::BallViolation(const Eigen::VectorXd& x) const {
  return std::max(0.0, x.norm() - radius);
}

ProblemView TrsInstance::View() const {
  ProblemView view;
  view.quadratic = quadratic ? &*quadratic : nullptr;
  view.linear = &linear;
  view.constraints = &constraints;
  view.rhs = &rhs;
  view.radius = radius;
  return view;
}

void TrsInstance::Validate() const {
  const int dim = n();
  if (dim < 1) throw Error(ErrorCode::kInvalidInstance, "instance has n = 0");
  if (constraints.cols() != dim && constraints.rows() > 0) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("A has {} columns, expected {}", constraints.cols(),
                            dim));
  }
  if (rhs.size() != constraints.rows()) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("b has length {}, A has {} rows", rhs.size(),
                            constraints.rows()));
  }
  if (quadratic && (quadratic->rows() != dim || quadratic->cols() != dim)) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("Q is {}x{}, expected {}x{}", quadratic->rows(),
                            quadratic->cols(), dim, dim));
  }
  if (!linear.allFinite() || !constraints.allFinite() || !rhs.allFinite() ||
      (quadratic && !quadratic->allFinite())) {
    throw Error(ErrorCode::kInvalidInstance, "instance data must be finite");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("radius must be positive, got {}", radius));
  }
}

TrsInstance MakeInstance(std::string id,
                         std::optional<Eigen::MatrixXd> quadratic,
                         Eigen::VectorXd linear, Eigen::MatrixXd constraints,
                         Eigen::VectorXd rhs, double radius) {
  TrsInstance instance;
  instance.id = std::move(id);
  if (quadratic) instance.quadratic = Symmetrize(*quadratic);
  instance.linear = std::move(linear);
  instance.constraints = std::move(constraints);
  if (instance.constraints.rows() == 0) {
    instance.constraints.resize(0, instance.linear.size());
  }
  instance.rhs = std::move(rhs);
  instance.radius = radius;
  instance.Validate();
  instance.normalized = IsNormalized(instance);
  return instance;
}

NormalizedInstance Normalize(const TrsInstance& instance) {
  instance.Validate();
  const double radius = instance.radius;
  NormalizedInstance out;
  TrsInstance& result = out.instance;
  NormalizationRecord& record = out.record;
  result.id = instance.id;
  record.radius_scale = radius;
  record.row_scales.resize(instance.m());
  result.constraints.resize(instance.m(), instance.n());
  result.rhs.resize(instance.m());
  for (int i = 0; i < instance.m(); ++i) {
    const double row_norm = instance.constraints.row(i).norm();
    if (row_norm == 0.0) {
      throw Error(ErrorCode::kInvalidInstance,
                  fmt::format("row {} of A is zero", i));
    }
    record.row_scales(i) = row_norm;
    result.constraints.row(i) = instance.constraints.row(i) / row_norm;
    result.rhs(i) = instance.rhs(i) / (row_norm * radius);
  }
  // Substituting x = radius x' scales Q by radius^2 and c by radius.
  result.linear = radius * instance.linear;
  if (instance.quadratic) {
    const Eigen::MatrixXd scaled = radius * radius * *instance.quadratic;
    const double spectral = SpectralNorm(scaled);
    if (spectral == 0.0) {
      record.status = NormalizationStatus::kDemotedToLinear;
    } else {
      record.q_scale = spectral;
      record.objective_scale = spectral;
      result.quadratic = Symmetrize(scaled / spectral);
      result.linear /= spectral;
    }
  }
  result.radius = 1.0;
  result.normalized = true;
  return out;
}

TrsInstance Denormalize(const TrsInstance& normalized,
                        const NormalizationRecord& record) {
  TrsInstance original;
  original.id = normalized.id;
  const double radius = record.radius_scale;
  original.radius = radius;
  original.constraints = record.row_scales.asDiagonal() * normalized.constraints;
  original.rhs = radius * record.row_scales.cwiseProduct(normalized.rhs);
  original.linear = normalized.linear * record.objective_scale / radius;
  if (normalized.quadratic) {
    original.quadratic =
        *normalized.quadratic * (record.objective_scale / (radius * radius));
  }
  original.normalized = IsNormalized(original);
  return original;
}

bool IsNormalized(const TrsInstance& instance) {
  if (std::abs(instance.radius - 1.0) > 1e-12) return false;
  for (int i = 0; i < instance.m(); ++i) {
    if (std::abs(instance.constraints.row(i).norm() - 1.0) > 1e-9) return false;
  }
  if (instance.quadratic &&
      std::abs(SpectralNorm(*instance.quadratic) - 1.0) > 1e-6) {
    return false;
  }
  return true;
}

Eigen::VectorXd SingularValues(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return Eigen::VectorXd();
  Eigen::VectorXd values;
  if (IsSymmetric(matrix)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, Eigen::EigenvaluesOnly);
    values = solver.eigenvalues().cwiseAbs();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
    values = svd.singularValues();
  }
  std::sort(values.data(), values.data() + values.size(),
            [](double a, double b) { return a > b; });
  return values;
}

double NuclearNorm(const Eigen::MatrixXd& matrix) {
  return SingularValues(matrix).sum();
}

InstanceStats ComputeInstanceStats(const TrsInstance& instance) {
  InstanceStats stats;
  stats.norm_c = instance.linear.norm();
  if (!instance.quadratic) {
    stats.singular_values.resize(0);
    return stats;
  }
  const Eigen::VectorXd all = SingularValues(*instance.quadratic);
  if (all.size() == 0 || all(0) == 0.0) {
    stats.singular_values.resize(0);
    return stats;
  }
  const double threshold = 1e-10 * all(0);
  int rank = 0;
  while (rank < all.size() && all(rank) > threshold) ++rank;
  stats.rank = rank;
  stats.singular_values = all.head(rank);
  stats.nuclear_norm = stats.singular_values.sum();
  stats.spectral_norm = all(0);
  return stats;
}

TrsInstance GenerateInstance(const GeneratorOptions& options) {
  const int n = options.n;
  const int m = options.m;
  const double r_min = options.fullness_target;
  if (n < 2) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("generator needs n >= 2, got {}", n));
  }
  if (m < 0) throw Error(ErrorCode::kInvalidInput, "generator needs m >= 0");
  if (!(r_min > 0.0 && r_min <= 0.5)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("fullness target must lie in (0, 0.5], got {}",
                            r_min));
  }
  if (options.kind == ModelKind::kQuadratic &&
      (options.rank < 1 || options.rank > n)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("rank must lie in [1, n], got {}", options.rank));
  }
  if (!(options.norm_c >= 0.0) || !(options.margin_scale >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "norm_c and margin_scale must be nonnegative");
  }

  // One stream per component.
  Rng row_rng(DeriveSeed(options.seed, 1));
  Rng anchor_rng(DeriveSeed(options.seed, 2));
  Rng margin_rng(DeriveSeed(options.seed, 3));
  Rng cost_rng(DeriveSeed(options.seed, 4));
  Rng spectrum_rng(DeriveSeed(options.seed, 5));

  TrsInstance instance;
  instance.id = fmt::format("gen-n{}-m{}-{}-s{}", n, m, ToString(options.kind),
                            options.seed);
  instance.constraints.resize(m, n);
  for (int i = 0; i < m; ++i) instance.constraints.row(i) = row_rng.UnitSphere(n);
  const Eigen::VectorXd anchor = anchor_rng.InBall(n, 1.0 - 2.0 * r_min);
  instance.rhs.resize(m);
  for (int i = 0; i < m; ++i) {
    const double margin = options.margin_scale * margin_rng.Uniform();
    instance.rhs(i) = instance.constraints.row(i).dot(anchor) + r_min + margin;
  }
  instance.linear = options.norm_c * cost_rng.UnitSphere(n);

  if (options.kind == ModelKind::kQuadratic) {
    const int k = options.rank;
    Eigen::VectorXd sigma(k);
    sigma(0) = 1.0;
    for (int i = 1; i < k; ++i) sigma(i) = 0.1 + 0.9 * spectrum_rng.Uniform();
    std::sort(sigma.data() + 1, sigma.data() + k,
              [](double a, double b) { return a > b; });
    if (options.signature == Signature::kIndefinite) {
      bool any_negative = false;
      for (int i = 0; i < k; ++i) {
        if (spectrum_rng.Uniform() < 0.5) {
          sigma(i) = -sigma(i);
          any_negative = true;
        }
      }
      if (!any_negative) sigma(k - 1) = -sigma(k - 1);
    }
    const Eigen::MatrixXd basis =
        RandomOrthonormalColumns(n, k, DeriveSeed(options.seed, 6));
    instance.quadratic =
        Symmetrize(basis * sigma.asDiagonal() * basis.transpose());
  }
  instance.radius = 1.0;
  instance.normalized = true;
  return instance;
}

ProblemView ProjectedInstance::View() const {
  ProblemView view;
  view.quadratic = quadratic ? &*quadratic : nullptr;
  view.linear = &linear;
  view.constraints = &constraints;
  view.rhs = &rhs;
  view.radius = ball_radius;
  return view;
}

ProjectedInstance BuildProjected(const TrsInstance& instance,
                                 const Projector& projector, double epsilon,
                                 Direction direction) {
  if (projector.n() != instance.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("projector has n={}, instance has n={}",
                            projector.n(), instance.n()));
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("epsilon must lie in (0, 0.5], got {}", epsilon));
  }
  if (!IsNormalized(instance)) {
    throw Error(ErrorCode::kInvalidInstance,
                "projected problems are built from normalized instances");
  }
  const Eigen::MatrixXd& p = projector.entries();
  ProjectedInstance projected;
  projected.direction = direction;
  projected.epsilon = epsilon;
  if (instance.quadratic) {
    projected.quadratic = Symmetrize(p * *instance.quadratic * p.transpose());
  }
  projected.linear = p * instance.linear;
  projected.constraints = instance.constraints * p.transpose();
  if (direction == Direction::kMinus) {
    projected.rhs = instance.rhs;
    projected.ball_radius = 1.0 - epsilon;
  } else {
    projected.rhs = instance.rhs.array() + epsilon;
    projected.ball_radius = 1.0 + epsilon;
  }
  projected.projector = {projector.seed(), projector.convention(),
                         projector.d(), projector.n()};
  return projected;
}

}  // namespace trsketch
