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

#ifndef TRSKETCH_EXPERIMENT_H_
#define TRSKETCH_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trsketch/bounds.h"
#include "trsketch/model.h"
#include "trsketch/projector.h"

namespace trsketch {

inline constexpr std::string_view kVersion = "0.1.0";

struct ExperimentConfig {
  int n = 200;
  int m = 50;
  int d = 40;
  ModelKind model = ModelKind::kLinear;
  int rank_k = 5;
  double epsilon = 0.1;
  double delta = 0.05;
  ScalingConvention convention = ScalingConvention::kGaussianInvSqrtN;
  int trials = 100;
  uint64_t master_seed = 1;
  double fullness_target = 0.1;
  double norm_c = 1.0;
  Signature signature = Signature::kPsd;
  double margin_scale = 0.25;
  // delta and epsilon are copied from the fields above.
  BoundsConfig bounds;
  double solver_tol = 1e-8;
  double feasibility_tol = 1e-9;
  int local_starts = 8;
  double grid_step = 0.01;
  // 0 picks the hardware concurrency; TRSKETCH_THREADS caps either choice.
  int threads = 0;
  // Adds wall-clock columns to trials.csv.
  bool record_timings = false;

  void Validate() const;
  // Quadratic gap checks are only evaluated for epsilon < 0.1.
  bool QuadraticGapEnabled() const { return epsilon < 0.1; }
};

ExperimentConfig ExperimentConfigFromJson(std::string_view text);
std::string ExperimentConfigToJson(const ExperimentConfig& config);

enum class TrialStatus { kCompleted, kProjectedInfeasible, kSolverFailure };
std::string_view ToString(TrialStatus status);
TrialStatus ParseTrialStatus(std::string_view token);

enum class ExactKind { kGlobal, kLocal, kNone };
std::string_view ToString(ExactKind kind);
ExactKind ParseExactKind(std::string_view token);

struct TrialRecord {
  int trial_index = 0;
  uint64_t sub_seed = 0;
  TrialStatus status = TrialStatus::kCompleted;
  // Pipeline stage and message for kSolverFailure.
  std::string failure_stage;
  std::optional<double> obj_minus;
  std::optional<double> obj_plus;
  std::optional<double> obj_exact;
  ExactKind exact_kind = ExactKind::kNone;
  std::optional<bool> lift_feasible_minus;
  std::optional<double> lift_violation;
  std::optional<bool> sandwich_lower;
  std::optional<bool> sandwich_upper;
  std::optional<double> gap_observed;
  std::optional<double> gap_bound;
  std::optional<bool> gap_within_bound;
  std::optional<double> full_original;
  std::optional<double> full_projected;
  std::optional<bool> fullness_gap_ok;
  std::optional<double> t_generate;
  std::optional<double> t_project;
  std::optional<double> t_solve_minus;
  std::optional<double> t_solve_plus;
  std::optional<double> t_solve_exact;
};

struct Frequency {
  int hits = 0;
  int denominator = 0;
  // NaN when the denominator is zero.
  double value() const;
};

struct ExperimentSummary {
  int trials = 0;
  int completed = 0;
  int projected_infeasible = 0;
  int solver_failure = 0;
  std::map<std::string, int> failure_stages;
  Frequency lift_feasible_minus;
  Frequency sandwich_lower;
  // sandwich_lower restricted to trials whose lift is feasible.
  Frequency sandwich_lower_feasible_lift;
  Frequency sandwich_upper;
  Frequency gap_within_bound;
  Frequency fullness_gap_ok;
  double mean_gap_observed = 0.0;
  double max_gap_observed = 0.0;
  double mean_gap_bound = 0.0;
  double max_gap_bound = 0.0;
  double max_lift_violation = 0.0;
  double wall_time = 0.0;
};

ExperimentSummary Summarize(const std::vector<TrialRecord>& records);

// Deterministic in (config, trial_index).
TrialRecord RunTrial(const ExperimentConfig& config, int trial_index);

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

ExperimentResult RunExperiment(const ExperimentConfig& config);
int ResolveThreadCount(const ExperimentConfig& config);

// trials.csv with the fixed column order; floats at 17 significant digits.
std::string TrialsToCsv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> TrialsFromCsv(std::string_view text);

// Omits the config echo when `config` is null.
std::string SummaryToJson(const ExperimentSummary& summary,
                          const ExperimentConfig* config);

// Writes out_dir/trials.csv and out_dir/summary.json.
void WriteExperiment(const ExperimentResult& result,
                     const ExperimentConfig& config, const std::string& out_dir);

}  // namespace trsketch

#endif  // TRSKETCH_EXPERIMENT_H_
