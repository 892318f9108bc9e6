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

#ifndef TRSKETCH_ERRORS_H_
#define TRSKETCH_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace trsketch {

enum class ErrorCode {
  kInvalidDimension,
  kDimensionMismatch,
  kInvalidInput,
  kInvalidInstance,
  kWrongSolver,
  kDegenerateSet,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// lets callers (the CLI in particular) distinguish usage problems from
// numerical ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trsketch

#endif  // TRSKETCH_ERRORS_H_
