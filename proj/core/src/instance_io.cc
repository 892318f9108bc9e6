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

#include "trsketch/instance_io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fmt/format.h"
#include "json.hpp"
#include "trsketch/errors.h"

namespace trsketch {
namespace {

using Json = nlohmann::json;

Json VectorToJson(const Eigen::VectorXd& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Json MatrixToJson(const Eigen::MatrixXd& matrix) {
  Json out = Json::array();
  for (int i = 0; i < matrix.rows(); ++i) {
    for (int j = 0; j < matrix.cols(); ++j) out.push_back(matrix(i, j));
  }
  return out;
}

// Non-finite doubles have no JSON literal; they are written as null.
Json Number(double value) {
  return std::isfinite(value) ? Json(value) : Json(nullptr);
}

const Json& Field(const Json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("missing field \"{}\"", key));
  }
  return *it;
}

Eigen::VectorXd ReadVector(const Json& array, int size, const char* key) {
  if (!array.is_array() || static_cast<int>(array.size()) != size) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("field \"{}\" must be an array of {} numbers", key,
                            size));
  }
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) {
    if (!array[i].is_number()) {
      throw Error(ErrorCode::kInvalidInstance,
                  fmt::format("field \"{}\"[{}] is not a number", key, i));
    }
    v(i) = array[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd ReadMatrix(const Json& array, int rows, int cols,
                           const char* key) {
  const Eigen::VectorXd flat = ReadVector(array, rows * cols, key);
  Eigen::MatrixXd matrix(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) matrix(i, j) = flat(i * cols + j);
  }
  return matrix;
}

int ReadCount(const Json& object, const char* key) {
  const Json& value = Field(object, key);
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("field \"{}\" must be a nonnegative integer", key));
  }
  return value.get<int>();
}

Json Parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("malformed JSON: {}", e.what()));
  }
}

}  // namespace

std::string InstanceToJson(const TrsInstance& instance) {
  Json out;
  out["id"] = instance.id;
  out["n"] = instance.n();
  out["m"] = instance.m();
  out["model"] = std::string(ToString(instance.kind()));
  out["Q"] = instance.quadratic ? MatrixToJson(*instance.quadratic) : Json(nullptr);
  out["c"] = VectorToJson(instance.linear);
  out["A"] = MatrixToJson(instance.constraints);
  out["b"] = VectorToJson(instance.rhs);
  out["radius"] = instance.radius;
  out["normalized"] = instance.normalized;
  return out.dump(2) + "\n";
}

TrsInstance InstanceFromJson(std::string_view text) {
  const Json in = Parse(text);
  try {
    const int n = ReadCount(in, "n");
    const int m = ReadCount(in, "m");
    const ModelKind kind = ParseModelKind(Field(in, "model").get<std::string>());
    std::optional<Eigen::MatrixXd> quadratic;
    const Json& q = Field(in, "Q");
    if (kind == ModelKind::kQuadratic) {
      if (q.is_null()) {
        throw Error(ErrorCode::kInvalidInstance,
                    "quadratic model requires a non-null \"Q\"");
      }
      quadratic = ReadMatrix(q, n, n, "Q");
    } else if (!q.is_null()) {
      throw Error(ErrorCode::kInvalidInstance, "linear model must have \"Q\": null");
    }
    std::string id = in.contains("id") ? in["id"].get<std::string>() : "";
    TrsInstance instance = MakeInstance(
        std::move(id), std::move(quadratic), ReadVector(Field(in, "c"), n, "c"),
        ReadMatrix(Field(in, "A"), m, n, "A"), ReadVector(Field(in, "b"), m, "b"),
        Field(in, "radius").get<double>());
    if (in.contains("normalized")) {
      const bool claimed = in["normalized"].get<bool>();
      if (claimed && !IsNormalized(instance)) {
        throw Error(ErrorCode::kInvalidInstance,
                    "instance is marked normalized but is not");
      }
      instance.normalized = claimed;
    }
    return instance;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("bad instance field: {}", e.what()));
  }
}

void SaveInstance(const TrsInstance& instance, const std::string& path) {
  WriteTextFile(path, InstanceToJson(instance));
}

TrsInstance LoadInstance(const std::string& path) {
  return InstanceFromJson(ReadTextFile(path));
}

std::string ProjectedToJson(const ProjectedInstance& projected) {
  Json out;
  out["direction"] = std::string(ToString(projected.direction));
  out["epsilon"] = projected.epsilon;
  out["d"] = projected.d();
  out["m"] = static_cast<int>(projected.constraints.rows());
  out["model"] = projected.quadratic ? "quadratic" : "linear";
  out["Q"] = projected.quadratic ? MatrixToJson(*projected.quadratic)
                                 : Json(nullptr);
  out["c"] = VectorToJson(projected.linear);
  out["A"] = MatrixToJson(projected.constraints);
  out["b"] = VectorToJson(projected.rhs);
  out["radius"] = projected.ball_radius;
  out["projector"] = {
      {"seed", projected.projector.seed},
      {"convention", std::string(ToString(projected.projector.convention))},
      {"d", projected.projector.d},
      {"n", projected.projector.n}};
  return out.dump(2) + "\n";
}

ProjectedInstance ProjectedFromJson(std::string_view text) {
  const Json in = Parse(text);
  try {
    ProjectedInstance projected;
    const int d = ReadCount(in, "d");
    const int m = ReadCount(in, "m");
    projected.direction =
        ParseDirection(Field(in, "direction").get<std::string>());
    projected.epsilon = Field(in, "epsilon").get<double>();
    const Json& q = Field(in, "Q");
    if (!q.is_null()) projected.quadratic = ReadMatrix(q, d, d, "Q");
    projected.linear = ReadVector(Field(in, "c"), d, "c");
    projected.constraints = ReadMatrix(Field(in, "A"), m, d, "A");
    projected.rhs = ReadVector(Field(in, "b"), m, "b");
    projected.ball_radius = Field(in, "radius").get<double>();
    const Json& ref = Field(in, "projector");
    projected.projector.seed = Field(ref, "seed").get<uint64_t>();
    projected.projector.convention =
        ParseScalingConvention(Field(ref, "convention").get<std::string>());
    projected.projector.d = ReadCount(ref, "d");
    projected.projector.n = ReadCount(ref, "n");
    return projected;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInstance,
                fmt::format("bad projected-instance field: {}", e.what()));
  }
}

std::string SolveReportToJson(const SolveReport& report) {
  Json out;
  out["status"] = std::string(ToString(report.status));
  out["objective"] = Number(report.objective);
  out["solution"] = VectorToJson(report.solution);
  out["kkt_residual"] = Number(report.kkt_residual);
  out["max_linear_violation"] = Number(report.max_linear_violation);
  out["ball_violation"] = Number(report.ball_violation);
  out["iterations"] = report.iterations;
  out["wall_time"] = report.wall_time;
  out["multipliers"] = VectorToJson(report.multipliers);
  out["ball_multiplier"] = Number(report.ball_multiplier);
  out["log"] = report.log;
  return out.dump(2) + "\n";
}

std::string FullnessToJson(const FullnessResult& result) {
  Json out;
  out["r"] = result.r;
  out["center"] = VectorToJson(result.center);
  out["residual"] = result.residual;
  out["converged"] = result.converged;
  return out.dump(2) + "\n";
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {} for reading", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, fmt::format("read failed: {}", path));
  return buffer.str();
}

void WriteTextFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {} for writing", path));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write failed: {}", path));
}

}  // namespace trsketch
