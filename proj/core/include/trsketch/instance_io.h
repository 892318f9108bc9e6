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

#ifndef TRSKETCH_INSTANCE_IO_H_
#define TRSKETCH_INSTANCE_IO_H_

#include <string>
#include <string_view>

#include "trsketch/model.h"
#include "trsketch/solvers.h"

namespace trsketch {

// Instance JSON:
//   {"id", "n", "m", "model": "linear"|"quadratic", "Q": row-major or null,
//    "c", "A": row-major, "b", "radius", "normalized"}
std::string InstanceToJson(const TrsInstance& instance);
TrsInstance InstanceFromJson(std::string_view text);
void SaveInstance(const TrsInstance& instance, const std::string& path);
TrsInstance LoadInstance(const std::string& path);

// Projected JSON adds "direction", "epsilon" and a "projector" reference
// {"seed", "convention", "d", "n"}; "n" is replaced by "d".
std::string ProjectedToJson(const ProjectedInstance& projected);
ProjectedInstance ProjectedFromJson(std::string_view text);

std::string SolveReportToJson(const SolveReport& report);
std::string FullnessToJson(const FullnessResult& result);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view content);

}  // namespace trsketch

#endif  // TRSKETCH_INSTANCE_IO_H_
