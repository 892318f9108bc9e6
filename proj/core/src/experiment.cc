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

#include "trsketch/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "fmt/format.h"
#include "json.hpp"
#include "trsketch/errors.h"
#include "trsketch/rng.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Streams derived from a trial's sub-seed.
constexpr uint64_t kGeneratorStream = 1;
constexpr uint64_t kProjectorStream = 2;
constexpr uint64_t kLocalMinusStream = 3;
constexpr uint64_t kLocalPlusStream = 4;
constexpr uint64_t kLocalExactStream = 5;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Raised inside a trial to mark the failing stage.
struct StageFailure {
  std::string stage;
};

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidInput, message);
}

}  // namespace

void ExperimentConfig::Validate() const {
  Require(n >= 2, fmt::format("n must be at least 2, got {}", n));
  Require(m >= 0, fmt::format("m must be nonnegative, got {}", m));
  Require(d >= 1 && d < n, fmt::format("need 1 <= d < n, got d={} n={}", d, n));
  Require(epsilon > 0.0 && epsilon <= 0.5,
          fmt::format("epsilon must lie in (0, 0.5], got {}", epsilon));
  Require(trials >= 1, fmt::format("trials must be at least 1, got {}", trials));
  Require(rank_k >= 1 && rank_k <= n,
          fmt::format("rank_k must lie in [1, n], got {}", rank_k));
  Require(fullness_target > 0.0 && fullness_target <= 0.5,
          fmt::format("fullness_target must lie in (0, 0.5], got {}",
                      fullness_target));
  Require(norm_c >= 0.0, "norm_c must be nonnegative");
  Require(margin_scale >= 0.0, "margin_scale must be nonnegative");
  Require(solver_tol >= 1e-10 && solver_tol <= 1e-2,
          fmt::format("solver_tol must lie in [1e-10, 1e-2], got {}", solver_tol));
  Require(feasibility_tol > 0.0, "feasibility_tol must be positive");
  Require(local_starts >= 1, "local_starts must be at least 1");
  Require(grid_step >= 1e-3 && grid_step <= 0.1,
          fmt::format("grid_step must lie in [1e-3, 0.1], got {}", grid_step));
  Require(threads >= 0, "threads must be nonnegative");
  BoundsConfig check = bounds;
  check.delta = delta;
  check.epsilon = epsilon;
  check.Validate();
}

ExperimentConfig ExperimentConfigFromJson(std::string_view text) {
  Json in;
  try {
    in = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("malformed config JSON: {}", e.what()));
  }
  if (!in.is_object()) {
    throw Error(ErrorCode::kInvalidInput, "config must be a JSON object");
  }
  static const std::set<std::string> kKnown = {
      "n", "m", "d", "model", "rank_k", "epsilon", "delta", "convention",
      "trials", "master_seed", "fullness_target", "norm_c", "signature",
      "margin_scale", "bounds", "solver_tol", "feasibility_tol",
      "local_starts", "grid_step", "threads", "record_timings"};
  for (const auto& [key, value] : in.items()) {
    if (!kKnown.count(key)) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("unknown config field \"{}\"", key));
    }
  }
  ExperimentConfig config;
  try {
    auto read = [&](const char* key, auto& field) {
      if (in.contains(key)) {
        field = in[key].get<std::remove_reference_t<decltype(field)>>();
      }
    };
    read("n", config.n);
    read("m", config.m);
    read("d", config.d);
    if (in.contains("model")) {
      config.model = ParseModelKind(in["model"].get<std::string>());
    }
    read("rank_k", config.rank_k);
    read("epsilon", config.epsilon);
    read("delta", config.delta);
    if (in.contains("convention")) {
      config.convention =
          ParseScalingConvention(in["convention"].get<std::string>());
    }
    read("trials", config.trials);
    read("master_seed", config.master_seed);
    read("fullness_target", config.fullness_target);
    read("norm_c", config.norm_c);
    if (in.contains("signature")) {
      config.signature = ParseSignature(in["signature"].get<std::string>());
    }
    read("margin_scale", config.margin_scale);
    if (in.contains("bounds")) {
      const Json& b = in["bounds"];
      for (const auto& [key, value] : b.items()) {
        if (key != "C0" && key != "C1") {
          throw Error(ErrorCode::kInvalidInput,
                      fmt::format("unknown bounds field \"{}\"", key));
        }
      }
      if (b.contains("C0")) config.bounds.c0 = b["C0"].get<double>();
      if (b.contains("C1")) config.bounds.c1 = b["C1"].get<double>();
    }
    read("solver_tol", config.solver_tol);
    read("feasibility_tol", config.feasibility_tol);
    read("local_starts", config.local_starts);
    read("grid_step", config.grid_step);
    read("threads", config.threads);
    read("record_timings", config.record_timings);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("bad config field: {}", e.what()));
  }
  config.bounds.delta = config.delta;
  config.bounds.epsilon = config.epsilon;
  config.Validate();
  return config;
}

std::string ExperimentConfigToJson(const ExperimentConfig& config) {
  Json out;
  out["n"] = config.n;
  out["m"] = config.m;
  out["d"] = config.d;
  out["model"] = std::string(ToString(config.model));
  out["rank_k"] = config.rank_k;
  out["epsilon"] = config.epsilon;
  out["delta"] = config.delta;
  out["convention"] = std::string(ToString(config.convention));
  out["trials"] = config.trials;
  out["master_seed"] = config.master_seed;
  out["fullness_target"] = config.fullness_target;
  out["norm_c"] = config.norm_c;
  out["signature"] = std::string(ToString(config.signature));
  out["margin_scale"] = config.margin_scale;
  out["bounds"] = {{"C0", config.bounds.c0}, {"C1", config.bounds.c1}};
  out["solver_tol"] = config.solver_tol;
  out["feasibility_tol"] = config.feasibility_tol;
  out["local_starts"] = config.local_starts;
  out["grid_step"] = config.grid_step;
  out["threads"] = config.threads;
  out["record_timings"] = config.record_timings;
  return out.dump(2) + "\n";
}

std::string_view ToString(TrialStatus status) {
  switch (status) {
    case TrialStatus::kCompleted:
      return "Completed";
    case TrialStatus::kProjectedInfeasible:
      return "ProjectedInfeasible";
    case TrialStatus::kSolverFailure:
      return "SolverFailure";
  }
  return "unknown";
}

TrialStatus ParseTrialStatus(std::string_view token) {
  if (token == "Completed") return TrialStatus::kCompleted;
  if (token == "ProjectedInfeasible") return TrialStatus::kProjectedInfeasible;
  if (token == "SolverFailure") return TrialStatus::kSolverFailure;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown trial status \"{}\"", token));
}

std::string_view ToString(ExactKind kind) {
  switch (kind) {
    case ExactKind::kGlobal:
      return "global";
    case ExactKind::kLocal:
      return "local";
    case ExactKind::kNone:
      return "none";
  }
  return "unknown";
}

ExactKind ParseExactKind(std::string_view token) {
  if (token == "global") return ExactKind::kGlobal;
  if (token == "local") return ExactKind::kLocal;
  if (token == "none") return ExactKind::kNone;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown exact kind \"{}\"", token));
}

double Frequency::value() const {
  return denominator > 0 ? static_cast<double>(hits) / denominator
                         : std::numeric_limits<double>::quiet_NaN();
}

ExperimentSummary Summarize(const std::vector<TrialRecord>& records) {
  ExperimentSummary summary;
  summary.trials = static_cast<int>(records.size());
  auto tally = [](Frequency& f, const std::optional<bool>& value) {
    if (!value) return;
    ++f.denominator;
    if (*value) ++f.hits;
  };
  int gap_count = 0;
  int bound_count = 0;
  for (const TrialRecord& r : records) {
    switch (r.status) {
      case TrialStatus::kCompleted:
        ++summary.completed;
        break;
      case TrialStatus::kProjectedInfeasible:
        ++summary.projected_infeasible;
        continue;
      case TrialStatus::kSolverFailure:
        ++summary.solver_failure;
        ++summary.failure_stages[r.failure_stage.substr(
            0, r.failure_stage.find(':'))];
        continue;
    }
    tally(summary.lift_feasible_minus, r.lift_feasible_minus);
    tally(summary.sandwich_lower, r.sandwich_lower);
    if (r.lift_feasible_minus.value_or(false)) {
      tally(summary.sandwich_lower_feasible_lift, r.sandwich_lower);
    }
    tally(summary.sandwich_upper, r.sandwich_upper);
    tally(summary.gap_within_bound, r.gap_within_bound);
    tally(summary.fullness_gap_ok, r.fullness_gap_ok);
    if (r.gap_observed) {
      summary.mean_gap_observed += *r.gap_observed;
      summary.max_gap_observed =
          gap_count == 0 ? *r.gap_observed
                         : std::max(summary.max_gap_observed, *r.gap_observed);
      ++gap_count;
    }
    if (r.gap_bound) {
      summary.mean_gap_bound += *r.gap_bound;
      summary.max_gap_bound =
          bound_count == 0 ? *r.gap_bound
                           : std::max(summary.max_gap_bound, *r.gap_bound);
      ++bound_count;
    }
    if (r.lift_violation) {
      summary.max_lift_violation =
          std::max(summary.max_lift_violation, *r.lift_violation);
    }
  }
  if (gap_count > 0) summary.mean_gap_observed /= gap_count;
  if (bound_count > 0) summary.mean_gap_bound /= bound_count;
  return summary;
}

TrialRecord RunTrial(const ExperimentConfig& config, int trial_index) {
  TrialRecord record;
  record.trial_index = trial_index;
  record.sub_seed =
      DeriveSeed(config.master_seed, static_cast<uint64_t>(trial_index));
  const uint64_t sub_seed = record.sub_seed;
  const bool timed = config.record_timings;
  const bool convex = config.model == ModelKind::kLinear ||
                      config.signature == Signature::kPsd;
  std::string stage = "generate";

  try {
    Clock::time_point start = Clock::now();
    GeneratorOptions generator;
    generator.n = config.n;
    generator.m = config.m;
    generator.kind = config.model;
    generator.rank = config.rank_k;
    generator.fullness_target = config.fullness_target;
    generator.seed = DeriveSeed(sub_seed, kGeneratorStream);
    generator.norm_c = config.norm_c;
    generator.signature = config.signature;
    generator.margin_scale = config.margin_scale;
    const TrsInstance instance =
        Normalize(GenerateInstance(generator)).instance;
    const double norm_c = instance.linear.norm();

    stage = "fullness_original";
    FullnessOptions fullness_options;
    const FullnessResult full_original =
        Fullness(instance.View(), fullness_options);
    record.full_original = full_original.r;
    if (timed) record.t_generate = Since(start);

    stage = "project";
    start = Clock::now();
    const Projector projector =
        Projector::Sample(config.n, config.d, config.convention,
                          DeriveSeed(sub_seed, kProjectorStream));
    const ProjectedInstance minus =
        BuildProjected(instance, projector, config.epsilon, Direction::kMinus);
    const ProjectedInstance plus =
        BuildProjected(instance, projector, config.epsilon, Direction::kPlus);
    if (timed) record.t_project = Since(start);

    auto solve = [&](const ProblemView& view, uint64_t stream) {
      if (convex) {
        ConvexSolverOptions options;
        options.tolerance = config.solver_tol;
        return SolveConvex(view, options);
      }
      LocalSolverOptions options;
      options.tolerance = config.solver_tol;
      options.starts = config.local_starts;
      options.seed = DeriveSeed(sub_seed, stream);
      return SolveLocal(view, options);
    };
    auto accepted = [](const SolveReport& report) {
      return report.status == SolveStatus::kOptimal ||
             report.status == SolveStatus::kLocalOptimal;
    };

    stage = "solve_minus";
    start = Clock::now();
    const SolveReport minus_report = solve(minus.View(), kLocalMinusStream);
    if (timed) record.t_solve_minus = Since(start);
    if (minus_report.status == SolveStatus::kInfeasible) {
      record.status = TrialStatus::kProjectedInfeasible;
      return record;
    }
    if (!accepted(minus_report)) {
      throw StageFailure{
          fmt::format("solve_minus: status {}", ToString(minus_report.status))};
    }

    stage = "solve_plus";
    start = Clock::now();
    const SolveReport plus_report = solve(plus.View(), kLocalPlusStream);
    if (timed) record.t_solve_plus = Since(start);
    if (!accepted(plus_report)) {
      throw StageFailure{
          fmt::format("solve_plus: status {}", ToString(plus_report.status))};
    }

    stage = "solve_exact";
    start = Clock::now();
    SolveReport exact_report;
    if (convex) {
      ConvexSolverOptions options;
      options.tolerance = config.solver_tol;
      exact_report = SolveConvex(instance.View(), options);
      record.exact_kind = ExactKind::kGlobal;
    } else if (config.n <= 3) {
      exact_report = SolveOracleSmall(instance.View(), config.grid_step);
      record.exact_kind = ExactKind::kGlobal;
    } else {
      LocalSolverOptions options;
      options.tolerance = config.solver_tol;
      options.starts = config.local_starts;
      options.seed = DeriveSeed(sub_seed, kLocalExactStream);
      exact_report = SolveLocal(instance.View(), options);
      record.exact_kind = ExactKind::kLocal;
    }
    if (timed) record.t_solve_exact = Since(start);
    if (!accepted(exact_report)) {
      throw StageFailure{
          fmt::format("solve_exact: status {}", ToString(exact_report.status))};
    }

    stage = "lift";
    const LiftResult lift = LiftAndCheck(instance, projector, minus_report);
    record.lift_violation = std::max(lift.linear_violation, lift.ball_excess);
    record.lift_feasible_minus = lift.linear_violation <= config.feasibility_tol &&
                                 lift.ball_excess <= config.feasibility_tol;

    stage = "bounds";
    record.obj_minus = minus_report.objective;
    record.obj_plus = plus_report.objective;
    record.obj_exact = exact_report.objective;
    SandwichVerdict verdict;
    std::optional<double> gap_bound;
    if (config.model == ModelKind::kLinear) {
      verdict = LinearSandwichCheck(*record.obj_minus, *record.obj_exact,
                                    *record.obj_plus, config.epsilon, norm_c);
      if (full_original.r > 0.0) {
        gap_bound = GapBoundLinear(config.epsilon, full_original.r, norm_c);
      }
    } else {
      verdict = QuadraticSandwichCheck(*record.obj_minus, *record.obj_exact,
                                       *record.obj_plus, config.epsilon,
                                       NuclearNorm(*instance.quadratic), norm_c);
      if (full_original.r > 0.0 && config.QuadraticGapEnabled()) {
        gap_bound =
            GapBoundQuadratic(config.epsilon, full_original.r, norm_c).value;
      }
    }
    record.sandwich_lower = verdict.lower_holds;
    record.sandwich_upper = verdict.upper_holds;
    record.gap_observed = verdict.gap_observed;
    if (gap_bound) {
      record.gap_bound = *gap_bound;
      record.gap_within_bound =
          verdict.gap_observed <= *gap_bound + kBoundSlack;
    }

    stage = "fullness_projected";
    const FullnessResult full_plus = Fullness(plus.View(), fullness_options);
    if (!full_plus.converged) {
      throw StageFailure{"fullness_projected: Plus feasible set is empty"};
    }
    record.full_projected = full_plus.r;
    record.fullness_gap_ok =
        FullnessGapCheck(full_original.r, full_plus.r, config.epsilon);
    record.status = TrialStatus::kCompleted;
  } catch (const StageFailure& failure) {
    TrialRecord failed;
    failed.trial_index = record.trial_index;
    failed.sub_seed = record.sub_seed;
    failed.status = TrialStatus::kSolverFailure;
    failed.failure_stage = failure.stage;
    return failed;
  } catch (const Error& error) {
    TrialRecord failed;
    failed.trial_index = record.trial_index;
    failed.sub_seed = record.sub_seed;
    failed.status = TrialStatus::kSolverFailure;
    failed.failure_stage = fmt::format("{}: {}", stage, error.what());
    return failed;
  }
  return record;
}

int ResolveThreadCount(const ExperimentConfig& config) {
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRSKETCH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) {
      threads = std::min<int>(threads, static_cast<int>(cap));
    }
  }
  return std::clamp(threads, 1, config.trials);
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const Clock::time_point start = Clock::now();
  ExperimentResult result;
  result.records.resize(config.trials);
  const int threads = ResolveThreadCount(config);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (int i = next++; i < config.trials && !failed; i = next++) {
      try {
        result.records[i] = RunTrial(config, i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  result.summary = Summarize(result.records);
  result.summary.wall_time = Since(start);
  return result;
}

}  // namespace trsketch
