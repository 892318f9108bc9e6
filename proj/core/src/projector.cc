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

#include "trsketch/projector.h"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "Eigen/QR"
#include "fmt/format.h"
#include "trsketch/errors.h"
#include "trsketch/model.h"
#include "trsketch/rng.h"

namespace trsketch {
namespace {

constexpr std::array<char, 8> kMagic = {'T', 'R', 'S', 'K', 'P', 'R', 'O', 'J'};
constexpr size_t kHeaderBytes = 32;

uint8_t ConventionTag(ScalingConvention convention) {
  switch (convention) {
    case ScalingConvention::kGaussianInvSqrtN:
      return 0;
    case ScalingConvention::kGaussianInvSqrtD:
      return 1;
    case ScalingConvention::kOrthonormalRows:
      return 2;
  }
  return 0xff;
}

ScalingConvention ConventionFromTag(uint8_t tag) {
  switch (tag) {
    case 0:
      return ScalingConvention::kGaussianInvSqrtN;
    case 1:
      return ScalingConvention::kGaussianInvSqrtD;
    case 2:
      return ScalingConvention::kOrthonormalRows;
    default:
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("unknown projector convention tag {}", tag));
  }
}

template <typename T>
void PutLittleEndian(T value, unsigned char* out) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
  }
}

template <typename T>
T GetLittleEndian(const unsigned char* in) {
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(in[i]) << (8 * i);
  }
  return value;
}

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("epsilon must lie in (0, 1), got {}", epsilon));
  }
}

void CheckLength(const Eigen::VectorXd& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{} has length {}, expected {}", what, v.size(),
                            expected));
  }
}

PropertyCheckReport Finish(PropertyCheckReport report) {
  report.fraction = report.trials == 0
                        ? 0.0
                        : static_cast<double>(report.satisfied) / report.trials;
  return report;
}

}  // namespace

std::string_view ToString(ScalingConvention convention) {
  switch (convention) {
    case ScalingConvention::kGaussianInvSqrtN:
      return "inv-sqrt-n";
    case ScalingConvention::kGaussianInvSqrtD:
      return "inv-sqrt-d";
    case ScalingConvention::kOrthonormalRows:
      return "orthonormal-rows";
  }
  return "unknown";
}

ScalingConvention ParseScalingConvention(std::string_view token) {
  if (token == "inv-sqrt-n") return ScalingConvention::kGaussianInvSqrtN;
  if (token == "inv-sqrt-d") return ScalingConvention::kGaussianInvSqrtD;
  if (token == "orthonormal-rows") return ScalingConvention::kOrthonormalRows;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown scaling convention '{}' (expected "
                          "inv-sqrt-n, inv-sqrt-d or orthonormal-rows)",
                          token));
}

Projector Projector::Sample(int n, int d, ScalingConvention convention,
                            uint64_t seed) {
  if (d < 1 || d >= n) {
    throw Error(ErrorCode::kInvalidDimension,
                fmt::format("projector needs 1 <= d < n, got d={} n={}", d, n));
  }
  Rng rng(seed);
  switch (convention) {
    case ScalingConvention::kGaussianInvSqrtN:
      return Projector(rng.GaussianMatrix(d, n, 1.0 / std::sqrt(double(n))),
                       convention, seed);
    case ScalingConvention::kGaussianInvSqrtD:
      return Projector(rng.GaussianMatrix(d, n, 1.0 / std::sqrt(double(d))),
                       convention, seed);
    case ScalingConvention::kOrthonormalRows: {
      const Eigen::MatrixXd gaussian = rng.GaussianMatrix(d, n);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian.transpose());
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
      return Projector(q.transpose(), convention, seed);
    }
  }
  throw Error(ErrorCode::kInvalidInput, "unhandled scaling convention");
}

Projector::Projector(Eigen::MatrixXd entries, ScalingConvention convention,
                     uint64_t seed)
    : entries_(std::move(entries)), convention_(convention), seed_(seed) {
  if (entries_.rows() < 1 || entries_.rows() >= entries_.cols()) {
    throw Error(ErrorCode::kInvalidDimension,
                fmt::format("projector needs 1 <= d < n, got d={} n={}",
                            entries_.rows(), entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "projector entries must be finite");
  }
  if (convention_ == ScalingConvention::kOrthonormalRows) {
    const Eigen::MatrixXd gram = entries_ * entries_.transpose();
    const double deviation =
        (gram - Eigen::MatrixXd::Identity(d(), d())).cwiseAbs().maxCoeff();
    if (deviation > 1e-10) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("rows are not orthonormal (max |PP^T - I| = {})",
                              deviation));
    }
  }
}

Eigen::VectorXd Projector::Apply(const Eigen::VectorXd& x) const {
  CheckLength(x, n(), "x");
  return entries_ * x;
}

Eigen::VectorXd Projector::Lift(const Eigen::VectorXd& u) const {
  CheckLength(u, d(), "u");
  return entries_.transpose() * u;
}

SpectralNormResult GramDeviation(const Projector& projector) {
  Eigen::MatrixXd deviation =
      projector.entries() * projector.entries().transpose();
  deviation.diagonal().array() -= 1.0;
  return SymmetricSpectralNorm(Symmetrize(deviation));
}

PropertyCheckReport CheckNormPreservation(
    const Projector& projector, const std::vector<Eigen::VectorXd>& xs,
    double epsilon) {
  CheckEpsilon(epsilon);
  if (xs.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no vectors to check");
  }
  PropertyCheckReport report;
  report.epsilon = epsilon;
  for (const Eigen::VectorXd& x : xs) {
    CheckLength(x, projector.n(), "x");
    const double norm2 = x.squaredNorm();
    if (norm2 == 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "zero vector passed to the norm-preservation check");
    }
    const double projected2 = projector.Apply(x).squaredNorm();
    ++report.trials;
    if ((1.0 - epsilon) * norm2 <= projected2 &&
        projected2 <= (1.0 + epsilon) * norm2) {
      ++report.satisfied;
    }
    report.worst_violation = std::max(report.worst_violation,
                                      std::abs(projected2 - norm2) / norm2);
  }
  return Finish(report);
}

PropertyCheckReport CheckInnerProduct(const Projector& projector,
                                      const std::vector<VectorPair>& pairs,
                                      double epsilon) {
  CheckEpsilon(epsilon);
  PropertyCheckReport report;
  report.epsilon = epsilon;
  for (const auto& [x, y] : pairs) {
    CheckLength(x, projector.n(), "x");
    CheckLength(y, projector.n(), "y");
    const double scale = x.norm() * y.norm();
    if (scale == 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "zero vector passed to the inner-product check");
    }
    const double deviation =
        std::abs(projector.Apply(x).dot(projector.Apply(y)) - x.dot(y));
    ++report.trials;
    if (deviation <= epsilon * scale) ++report.satisfied;
    report.worst_violation = std::max(report.worst_violation, deviation / scale);
  }
  return Finish(report);
}

PropertyCheckReport CheckLinearMap(const Projector& projector,
                                   const Eigen::MatrixXd& rows,
                                   const std::vector<Eigen::VectorXd>& xs,
                                   double epsilon) {
  CheckEpsilon(epsilon);
  if (rows.cols() != projector.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("matrix has {} columns, projector expects {}",
                            rows.cols(), projector.n()));
  }
  for (int i = 0; i < rows.rows(); ++i) {
    if (std::abs(rows.row(i).norm() - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("row {} has norm {}, expected 1", i,
                              rows.row(i).norm()));
    }
  }
  const Eigen::MatrixXd sketched_rows = rows * projector.entries().transpose();
  PropertyCheckReport report;
  report.epsilon = epsilon;
  for (const Eigen::VectorXd& x : xs) {
    CheckLength(x, projector.n(), "x");
    const double norm = x.norm();
    const Eigen::VectorXd exact = rows * x;
    const Eigen::VectorXd sketched = sketched_rows * projector.Apply(x);
    const double deviation =
        rows.rows() == 0 ? 0.0 : (sketched - exact).cwiseAbs().maxCoeff();
    ++report.trials;
    if (deviation <= epsilon * norm) ++report.satisfied;
    if (norm > 0.0) {
      report.worst_violation = std::max(report.worst_violation, deviation / norm);
    }
  }
  return Finish(report);
}

PropertyCheckReport CheckQuadraticForm(const Projector& projector,
                                       const Eigen::MatrixXd& quadratic,
                                       const std::vector<VectorPair>& pairs,
                                       double epsilon) {
  CheckEpsilon(epsilon);
  if (quadratic.rows() != projector.n() || quadratic.cols() != projector.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("matrix is {}x{}, projector expects {}x{}",
                            quadratic.rows(), quadratic.cols(), projector.n(),
                            projector.n()));
  }
  const double nuclear = NuclearNorm(quadratic);
  const Eigen::MatrixXd& p = projector.entries();
  // P Q P^T, so that x^T P^T P Q P^T P y = (P x)^T (P Q P^T) (P y).
  const Eigen::MatrixXd sketched = p * quadratic * p.transpose();
  PropertyCheckReport report;
  report.epsilon = epsilon;
  for (const auto& [x, y] : pairs) {
    CheckLength(x, projector.n(), "x");
    CheckLength(y, projector.n(), "y");
    const double exact = x.dot(quadratic * y);
    const double approx = projector.Apply(x).dot(sketched * projector.Apply(y));
    const double deviation = std::abs(approx - exact);
    const double scale = x.norm() * y.norm() * nuclear;
    ++report.trials;
    if (deviation <= 3.0 * epsilon * scale) ++report.satisfied;
    if (scale > 0.0) {
      report.worst_violation = std::max(report.worst_violation, deviation / scale);
    }
  }
  return Finish(report);
}

std::vector<Eigen::VectorXd> SampleUnitVectors(int n, int count,
                                               uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(count);
  for (int i = 0; i < count; ++i) xs.push_back(rng.UnitSphere(n));
  return xs;
}

std::vector<VectorPair> SampleUnitPairs(int n, int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<VectorPair> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x = rng.UnitSphere(n);
    Eigen::VectorXd y = rng.UnitSphere(n);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

void WriteProjector(const Projector& projector, std::ostream& out) {
  std::array<unsigned char, kHeaderBytes> header{};
  std::memcpy(header.data(), kMagic.data(), kMagic.size());
  PutLittleEndian<uint32_t>(static_cast<uint32_t>(projector.d()), &header[8]);
  PutLittleEndian<uint32_t>(static_cast<uint32_t>(projector.n()), &header[12]);
  header[16] = ConventionTag(projector.convention());
  PutLittleEndian<uint64_t>(projector.seed(), &header[17]);
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  std::array<unsigned char, 8> buffer{};
  for (int i = 0; i < projector.d(); ++i) {
    for (int j = 0; j < projector.n(); ++j) {
      uint64_t bits;
      const double value = projector.entries()(i, j);
      std::memcpy(&bits, &value, sizeof(bits));
      PutLittleEndian<uint64_t>(bits, buffer.data());
      out.write(reinterpret_cast<const char*>(buffer.data()), buffer.size());
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write projector");
}

Projector ReadProjector(std::istream& in) {
  std::array<unsigned char, kHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw Error(ErrorCode::kIo, "truncated projector header");
  }
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kIo, "bad projector magic");
  }
  const uint32_t d = GetLittleEndian<uint32_t>(&header[8]);
  const uint32_t n = GetLittleEndian<uint32_t>(&header[12]);
  const ScalingConvention convention = ConventionFromTag(header[16]);
  const uint64_t seed = GetLittleEndian<uint64_t>(&header[17]);
  Eigen::MatrixXd entries(d, n);
  std::array<unsigned char, 8> buffer{};
  for (uint32_t i = 0; i < d; ++i) {
    for (uint32_t j = 0; j < n; ++j) {
      in.read(reinterpret_cast<char*>(buffer.data()), buffer.size());
      if (in.gcount() != 8) throw Error(ErrorCode::kIo, "truncated projector data");
      const uint64_t bits = GetLittleEndian<uint64_t>(buffer.data());
      double value;
      std::memcpy(&value, &bits, sizeof(value));
      entries(i, j) = value;
    }
  }
  return Projector(std::move(entries), convention, seed);
}

void SaveProjector(const Projector& projector, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path));
  WriteProjector(projector, out);
}

Projector LoadProjector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path));
  return ReadProjector(in);
}

}  // namespace trsketch
