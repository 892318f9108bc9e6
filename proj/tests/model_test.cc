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


#include <cmath>
#include <random>

#include "Eigen/Eigenvalues"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trsketch/errors.h"
#include "trsketch/linalg.h"
#include "trsketch/model.h"
#include "trsketch/projector.h"
#include "trsketch/rng.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

TrsInstance TwoDimInstance(double radius) {
  Eigen::MatrixXd a(1, 2);
  a << 2.0, 0.0;
  return MakeInstance("fixture", std::nullopt, Eigen::Vector2d(1.0, -1.0), a,
                      Eigen::VectorXd::Constant(1, 1.0), radius);
}

TEST(TrsInstance, ValidateRejectsBadShapes) {
  TrsInstance inst = TwoDimInstance(1.0);
  EXPECT_NO_THROW(inst.Validate());
  inst.radius = 0.0;
  EXPECT_THROW(inst.Validate(), Error);
  inst = TwoDimInstance(1.0);
  inst.rhs = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(inst.Validate(), Error);
  inst = TwoDimInstance(1.0);
  inst.quadratic = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(inst.Validate(), Error);
  inst = TwoDimInstance(1.0);
  inst.linear(0) = std::nan("");
  EXPECT_THROW(inst.Validate(), Error);
}

TEST(ProblemView, ObjectiveGradientViolations) {
  const Eigen::MatrixXd q = (Eigen::Matrix2d() << 2, 1, 1, 3).finished();
  TrsInstance inst = MakeInstance("v", q, Eigen::Vector2d(1, -2),
                                  Eigen::MatrixXd::Identity(2, 2),
                                  Eigen::Vector2d(0.5, 0.5), 1.0);
  const Eigen::Vector2d x(0.6, -0.9);
  EXPECT_NEAR(inst.Objective(x), testing::DirectObjective(&q, inst.linear, x), 1e-14);
  EXPECT_LE((inst.View().Gradient(x) - (2 * q * x + inst.linear)).norm(), 1e-14);
  EXPECT_NEAR(inst.View().LinearViolation(x), 0.1, 1e-14);
  EXPECT_NEAR(inst.View().BallViolation(x), x.norm() - 1.0, 1e-14);
  EXPECT_EQ(inst.View().LinearViolation(Eigen::Vector2d(0, 0)), 0.0);
}

TEST(Normalize, DividesRowsByTheirNorm) {
  const NormalizedInstance out = Normalize(TwoDimInstance(1.0));
  EXPECT_DOUBLE_EQ(out.instance.constraints(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(out.instance.constraints(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(out.instance.rhs(0), 0.5);
  EXPECT_DOUBLE_EQ(out.record.row_scales(0), 2.0);
  EXPECT_TRUE(out.instance.normalized);
  EXPECT_TRUE(IsNormalized(out.instance));
}

TEST(Normalize, RadiusThreeRescalesObjective) {
  TrsInstance inst = TwoDimInstance(3.0);
  inst.quadratic = Eigen::Matrix2d::Identity();
  const NormalizedInstance out = Normalize(inst);
  EXPECT_DOUBLE_EQ(out.instance.radius, 1.0);
  EXPECT_DOUBLE_EQ(out.record.radius_scale, 3.0);
  EXPECT_NEAR(out.record.q_scale, 9.0, 1e-12);
  EXPECT_NEAR(SpectralNorm(*out.instance.quadratic), 1.0, 1e-12);

  // f(x) = objective_scale * f'(x / radius) on corresponding points.
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd x = rng.InBall(2, 3.0);
    EXPECT_NEAR(inst.Objective(x),
                out.record.objective_scale * out.instance.Objective(x / 3.0), 1e-12);
    const bool original_feasible = inst.View().LinearViolation(x) == 0.0;
    const bool scaled_feasible = out.instance.View().LinearViolation(x / 3.0) <= 1e-15;
    EXPECT_EQ(original_feasible, scaled_feasible);
  }
}

TEST(Normalize, AlreadyNormalizedIsUnchanged) {
  const TrsInstance inst = GenerateInstance({.n = 8, .m = 4,
                                             .kind = ModelKind::kQuadratic,
                                             .rank = 3, .seed = 5});
  const NormalizedInstance out = Normalize(inst);
  EXPECT_LE((out.instance.constraints - inst.constraints).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((out.instance.rhs - inst.rhs).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((out.instance.linear - inst.linear).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((*out.instance.quadratic - *inst.quadratic).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((out.record.row_scales.array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(out.record.radius_scale, 1.0);
  EXPECT_NEAR(out.record.q_scale, 1.0, 1e-12);
  EXPECT_NEAR(out.record.objective_scale, 1.0, 1e-12);
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    TrsInstance inst = testing::RandomSmallInstance(4, 3, trial % 3, gen);
    inst.constraints *= 1.0 + trial;
    inst.radius = 0.5 + trial;
    if (inst.quadratic) *inst.quadratic *= 7.0;
    const TrsInstance once = Normalize(inst).instance;
    const TrsInstance twice = Normalize(once).instance;
    EXPECT_LE((once.constraints - twice.constraints).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((once.rhs - twice.rhs).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((once.linear - twice.linear).cwiseAbs().maxCoeff(), 1e-12);
    if (once.quadratic) {
      EXPECT_LE((*once.quadratic - *twice.quadratic).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Normalize, DenormalizeInverts) {
  std::mt19937_64 gen(4);
  TrsInstance inst = testing::RandomSmallInstance(5, 4, 2, gen);
  inst.constraints.row(1) *= 3.0;
  inst.radius = 2.5;
  *inst.quadratic *= 0.2;
  const NormalizedInstance out = Normalize(inst);
  const TrsInstance back = Denormalize(out.instance, out.record);
  EXPECT_LE((back.constraints - inst.constraints).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((back.rhs - inst.rhs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((back.linear - inst.linear).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((*back.quadratic - *inst.quadratic).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_DOUBLE_EQ(back.radius, 2.5);
}

TEST(Normalize, ZeroRowIsInvalid) {
  TrsInstance inst = TwoDimInstance(1.0);
  inst.constraints.setZero();
  try {
    Normalize(inst);
    ADD_FAILURE() << "zero row accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInstance);
  }
}

TEST(Normalize, ZeroQuadraticIsDemoted) {
  TrsInstance inst = TwoDimInstance(1.0);
  inst.quadratic = Eigen::Matrix2d::Zero();
  const NormalizedInstance out = Normalize(inst);
  EXPECT_EQ(out.record.status, NormalizationStatus::kDemotedToLinear);
  EXPECT_EQ(out.instance.kind(), ModelKind::kLinear);
}

TEST(InstanceStats, DiagonalQuadratic) {
  TrsInstance inst = TwoDimInstance(1.0);
  inst.linear = Eigen::Vector3d(0, 0, 0);
  inst.constraints = Eigen::MatrixXd(0, 3);
  inst.rhs = Eigen::VectorXd(0);
  inst.quadratic = Eigen::Vector3d(1.0, 0.5, 0.0).asDiagonal();
  const InstanceStats stats = ComputeInstanceStats(inst);
  EXPECT_EQ(stats.rank, 2);
  ASSERT_EQ(stats.singular_values.size(), 2);
  EXPECT_NEAR(stats.singular_values(0), 1.0, 1e-14);
  EXPECT_NEAR(stats.singular_values(1), 0.5, 1e-14);
  EXPECT_NEAR(stats.nuclear_norm, 1.5, 1e-14);
  EXPECT_NEAR(stats.spectral_norm, 1.0, 1e-14);
}

TEST(InstanceStats, LinearModel) {
  TrsInstance inst = TwoDimInstance(1.0);
  inst.linear = Eigen::Vector2d(3, 4);
  const InstanceStats stats = ComputeInstanceStats(inst);
  EXPECT_DOUBLE_EQ(stats.norm_c, 5.0);
  EXPECT_EQ(stats.rank, 0);
  EXPECT_EQ(stats.nuclear_norm, 0.0);
}

TEST(InstanceStats, RecoversConstructedSpectrum) {
  const Eigen::MatrixXd u = RandomOrthonormalColumns(100, 5, 3);
  const Eigen::MatrixXd v = RandomOrthonormalColumns(100, 5, 4);
  const Eigen::VectorXd sigma =
      (Eigen::VectorXd(5) << 2.0, 1.5, 0.7, 0.2, 0.01).finished();
  const Eigen::MatrixXd q = u * sigma.asDiagonal() * v.transpose();
  const Eigen::VectorXd recovered = SingularValues(q);
  EXPECT_LE((recovered.head(5) - sigma).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(NuclearNorm(q), sigma.sum(), 1e-8);
}

TEST(GenerateInstance, RowsUnitAndAnchorBallInside) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const TrsInstance inst =
        GenerateInstance({.n = 30, .m = 12, .fullness_target = 0.2, .seed = seed,
                          .norm_c = 2.0});
    EXPECT_TRUE(IsNormalized(inst));
    EXPECT_NEAR(inst.linear.norm(), 2.0, 1e-12);
    for (int i = 0; i < inst.m(); ++i) {
      EXPECT_NEAR(inst.constraints.row(i).norm(), 1.0, 1e-12);
    }
    const FullnessResult full = Fullness(inst.View());
    EXPECT_GE(full.r, 0.2 - 1e-6);
  }
}

TEST(GenerateInstance, NoConstraintsIsUnitBall) {
  const TrsInstance inst = GenerateInstance({.n = 6, .m = 0, .seed = 2});
  EXPECT_EQ(inst.m(), 0);
  EXPECT_NEAR(Fullness(inst.View()).r, 1.0, 1e-9);
  const SolveReport report = SolveConvex(inst.View());
  EXPECT_NEAR(report.objective, -inst.linear.norm(), 1e-8);
  EXPECT_LE((report.solution + inst.linear / inst.linear.norm()).norm(), 1e-6);
}

TEST(GenerateInstance, QuadraticSpectrum) {
  const TrsInstance psd = GenerateInstance(
      {.n = 40, .m = 5, .kind = ModelKind::kQuadratic, .rank = 4, .seed = 3});
  const InstanceStats stats = ComputeInstanceStats(psd);
  EXPECT_EQ(stats.rank, 4);
  EXPECT_NEAR(stats.spectral_norm, 1.0, 1e-12);
  const Eigen::VectorXd eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(*psd.quadratic).eigenvalues();
  EXPECT_GE(eig.minCoeff(), -1e-12);

  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const TrsInstance indefinite = GenerateInstance(
        {.n = 10, .m = 3, .kind = ModelKind::kQuadratic, .rank = 3, .seed = seed,
         .signature = Signature::kIndefinite});
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                  *indefinite.quadratic)
                                  .eigenvalues();
    EXPECT_LT(e.minCoeff(), -0.05);
    EXPECT_NEAR(e.cwiseAbs().maxCoeff(), 1.0, 1e-12);
  }
}

TEST(GenerateInstance, DeterministicAndValidated) {
  const GeneratorOptions options{.n = 12, .m = 6, .kind = ModelKind::kQuadratic,
                                 .rank = 2, .seed = 77};
  const TrsInstance a = GenerateInstance(options);
  const TrsInstance b = GenerateInstance(options);
  EXPECT_EQ(a.constraints, b.constraints);
  EXPECT_EQ(a.rhs, b.rhs);
  EXPECT_EQ(a.linear, b.linear);
  EXPECT_EQ(*a.quadratic, *b.quadratic);
  EXPECT_THROW(GenerateInstance({.n = 1, .m = 1}), Error);
  EXPECT_THROW(GenerateInstance({.n = 5, .m = 1, .fullness_target = 0.6}), Error);
  EXPECT_THROW(GenerateInstance({.n = 5, .m = 1, .fullness_target = 0.0}), Error);
  EXPECT_THROW(
      GenerateInstance({.n = 5, .m = 1, .kind = ModelKind::kQuadratic, .rank = 6}),
      Error);
}

TEST(GenerateInstance, PsdLocalAgreesWithConvex) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const TrsInstance inst = GenerateInstance(
        {.n = 15, .m = 8, .kind = ModelKind::kQuadratic, .rank = 4, .seed = seed});
    const SolveReport convex = SolveConvex(inst.View());
    const SolveReport local = SolveLocal(inst.View(), {.starts = 8, .seed = seed});
    ASSERT_EQ(convex.status, SolveStatus::kOptimal);
    EXPECT_NEAR(local.objective, convex.objective, 1e-5);
  }
}

TEST(BuildProjected, MinusAndPlusDefinitions) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 0, 0, 0, 1, 0;
  const TrsInstance inst = MakeInstance("b", std::nullopt, Eigen::Vector3d(1, 2, 3), a,
                                        Eigen::Vector2d(0.2, 0.4));
  const Projector p = Projector::Sample(3, 2, ScalingConvention::kGaussianInvSqrtN, 1);
  const ProjectedInstance minus = BuildProjected(inst, p, 0.1, Direction::kMinus);
  EXPECT_DOUBLE_EQ(minus.ball_radius, 0.9);
  EXPECT_EQ(minus.rhs, inst.rhs);
  const ProjectedInstance plus = BuildProjected(inst, p, 0.1, Direction::kPlus);
  EXPECT_DOUBLE_EQ(plus.ball_radius, 1.1);
  EXPECT_NEAR(plus.rhs(0), 0.3, 1e-15);
  EXPECT_NEAR(plus.rhs(1), 0.5, 1e-15);
  EXPECT_LE((plus.linear - p.entries() * inst.linear).norm(), 1e-15);
  EXPECT_LE((plus.constraints - a * p.entries().transpose()).norm(), 1e-15);
  EXPECT_EQ(plus.projector.seed, 1u);
  EXPECT_EQ(plus.projector.n, 3);
  EXPECT_EQ(plus.projector.d, 2);
  EXPECT_FALSE(plus.quadratic.has_value());
}

TEST(BuildProjected, Validation) {
  const TrsInstance inst = GenerateInstance({.n = 6, .m = 2, .seed = 1});
  const Projector p = Projector::Sample(6, 2, ScalingConvention::kGaussianInvSqrtN, 1);
  EXPECT_THROW(BuildProjected(inst, p, 0.0, Direction::kMinus), Error);
  EXPECT_THROW(BuildProjected(inst, p, 0.6, Direction::kMinus), Error);
  EXPECT_NO_THROW(BuildProjected(inst, p, 0.5, Direction::kMinus));
  const Projector wrong = Projector::Sample(7, 2, ScalingConvention::kGaussianInvSqrtN, 1);
  EXPECT_THROW(BuildProjected(inst, wrong, 0.1, Direction::kMinus), Error);
  TrsInstance raw = inst;
  raw.constraints *= 2.0;
  raw.normalized = false;
  EXPECT_THROW(BuildProjected(raw, p, 0.1, Direction::kMinus), Error);
}

TEST(BuildProjected, QuadraticIsSymmetrizedSketch) {
  const TrsInstance inst = GenerateInstance(
      {.n = 20, .m = 3, .kind = ModelKind::kQuadratic, .rank = 3, .seed = 4});
  const Projector p = Projector::Sample(20, 5, ScalingConvention::kGaussianInvSqrtD, 2);
  const ProjectedInstance proj = BuildProjected(inst, p, 0.2, Direction::kMinus);
  const Eigen::MatrixXd expected = p.entries() * *inst.quadratic * p.entries().transpose();
  EXPECT_LE((*proj.quadratic - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(*proj.quadratic, proj.quadratic->transpose());
}

TEST(BuildProjected, SpanSupportedInstanceObjectivesCoincide) {
  const Projector p = Projector::Sample(30, 6, ScalingConvention::kOrthonormalRows, 9);
  const Eigen::MatrixXd pt = p.entries().transpose();
  const Eigen::MatrixXd span = pt * p.entries();
  Rng rng(3);
  const Eigen::MatrixXd g = rng.GaussianMatrix(30, 30);
  Eigen::MatrixXd q = span * (g + g.transpose()) * span;
  q /= SpectralNorm(q);
  const Eigen::VectorXd c = span * rng.GaussianVector(30);
  Eigen::MatrixXd a = rng.GaussianMatrix(4, 30);
  a.rowwise().normalize();
  const TrsInstance inst = MakeInstance("span", q, c, a, Eigen::VectorXd::Ones(4));
  const ProjectedInstance proj = BuildProjected(inst, p, 0.1, Direction::kPlus);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = span * rng.GaussianVector(30);
    const Eigen::VectorXd u = p.Apply(x);
    EXPECT_NEAR(proj.View().Objective(u), inst.Objective(x),
                1e-8 * std::max(1.0, std::abs(inst.Objective(x))));
  }
}

TEST(BuildProjected, OrthonormalMinusFeasiblePointsLift) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const TrsInstance inst =
        GenerateInstance({.n = 25, .m = 10, .seed = static_cast<uint64_t>(trial + 1)});
    const Projector p =
        Projector::Sample(25, 8, ScalingConvention::kOrthonormalRows, trial + 100);
    const ProjectedInstance minus = BuildProjected(inst, p, 0.1, Direction::kMinus);
    Rng rng(trial);
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd u = rng.InBall(8, 0.9);
      if (minus.View().LinearViolation(u) > 0.0) continue;
      const Eigen::VectorXd x = p.Lift(u);
      EXPECT_LE(inst.View().LinearViolation(x), 1e-10);
      EXPECT_NEAR(x.norm(), u.norm(), 1e-10);
      EXPECT_LT(x.norm(), 1.0);
    }
  }
}

TEST(BuildProjected, PlusRelaxesMinus) {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    const TrsInstance inst = GenerateInstance({.n = 40, .m = 10, .seed = seed});
    const Projector p =
        Projector::Sample(40, 10, ScalingConvention::kGaussianInvSqrtN, seed);
    const ProjectedInstance minus = BuildProjected(inst, p, 0.2, Direction::kMinus);
    const ProjectedInstance plus = BuildProjected(inst, p, 0.2, Direction::kPlus);
    const SolveReport rm = SolveConvex(minus.View());
    const SolveReport rp = SolveConvex(plus.View());
    if (rm.status == SolveStatus::kOptimal && rp.status == SolveStatus::kOptimal) {
      EXPECT_LE(rp.objective, rm.objective + 1e-9);
    }
    Rng rng(seed);
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd u = rng.InBall(10, 0.8);
      if (minus.View().LinearViolation(u) == 0.0) {
        EXPECT_EQ(plus.View().LinearViolation(u), 0.0);
      }
    }
  }
}

TEST(ModelEnums, TokensRoundTrip) {
  EXPECT_EQ(ParseModelKind(ToString(ModelKind::kQuadratic)), ModelKind::kQuadratic);
  EXPECT_EQ(ParseModelKind(ToString(ModelKind::kLinear)), ModelKind::kLinear);
  EXPECT_EQ(ParseSignature(ToString(Signature::kIndefinite)), Signature::kIndefinite);
  EXPECT_EQ(ParseDirection(ToString(Direction::kPlus)), Direction::kPlus);
  EXPECT_THROW(ParseDirection("sideways"), Error);
}

}  // namespace
}  // namespace trsketch
