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
#include <filesystem>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "json.hpp"
#include "trsketch/errors.h"
#include "trsketch/experiment.h"
#include "trsketch/instance_io.h"

namespace trsketch {
namespace {

using Json = nlohmann::json;

constexpr const char* kColumns[] = {
    "trial_index",     "sub_seed",      "status",         "obj_minus",
    "obj_plus",        "obj_exact",     "exact_kind",     "lift_feasible_minus",
    "lift_violation",  "sandwich_lower", "sandwich_upper", "gap_observed",
    "gap_bound",       "gap_within_bound", "full_original", "full_projected",
    "fullness_gap_ok", "t_generate",    "t_project",      "t_solve_minus",
    "t_solve_plus",    "t_solve_exact"};
constexpr int kColumnCount = sizeof(kColumns) / sizeof(kColumns[0]);

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string Cell(const std::optional<double>& value) {
  return value ? fmt::format("{:.17g}", *value) : std::string();
}

std::string Cell(const std::optional<bool>& value) {
  return value ? std::string(*value ? "true" : "false") : std::string();
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      field.clear();
      row.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidInput, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> ParseDouble(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size()) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("bad numeric CSV cell \"{}\"", cell));
  }
  return value;
}

std::optional<bool> ParseBool(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("bad boolean CSV cell \"{}\"", cell));
}

Json FrequencyJson(const Frequency& f) {
  const double value = f.value();
  return {{"hits", f.hits},
          {"denominator", f.denominator},
          {"frequency", std::isfinite(value) ? Json(value) : Json(nullptr)}};
}

}  // namespace

std::string TrialsToCsv(const std::vector<TrialRecord>& records) {
  std::string out;
  for (int c = 0; c < kColumnCount; ++c) {
    if (c > 0) out += ',';
    out += kColumns[c];
  }
  out += '\n';
  for (const TrialRecord& r : records) {
    const std::vector<std::string> cells = {
        std::to_string(r.trial_index),
        std::to_string(r.sub_seed),
        std::string(ToString(r.status)),
        Cell(r.obj_minus),
        Cell(r.obj_plus),
        Cell(r.obj_exact),
        std::string(ToString(r.exact_kind)),
        Cell(r.lift_feasible_minus),
        Cell(r.lift_violation),
        Cell(r.sandwich_lower),
        Cell(r.sandwich_upper),
        Cell(r.gap_observed),
        Cell(r.gap_bound),
        Cell(r.gap_within_bound),
        Cell(r.full_original),
        Cell(r.full_projected),
        Cell(r.fullness_gap_ok),
        Cell(r.t_generate),
        Cell(r.t_project),
        Cell(r.t_solve_minus),
        Cell(r.t_solve_plus),
        Cell(r.t_solve_exact)};
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += ',';
      out += Quote(cells[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> TrialsFromCsv(std::string_view text) {
  const std::vector<std::vector<std::string>> rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorCode::kInvalidInput, "empty trials CSV");
  const std::vector<std::string>& header = rows.front();
  if (static_cast<int>(header.size()) != kColumnCount) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("trials CSV has {} columns, expected {}",
                            header.size(), kColumnCount));
  }
  for (int c = 0; c < kColumnCount; ++c) {
    if (header[c] != kColumns[c]) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("column {} is \"{}\", expected \"{}\"", c,
                              header[c], kColumns[c]));
    }
  }
  std::vector<TrialRecord> records;
  for (size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string>& cells = rows[i];
    if (static_cast<int>(cells.size()) != kColumnCount) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("row {} has {} cells, expected {}", i,
                              cells.size(), kColumnCount));
    }
    TrialRecord r;
    try {
      r.trial_index = std::stoi(cells[0]);
      r.sub_seed = std::stoull(cells[1]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("row {} has a bad index or seed", i));
    }
    r.status = ParseTrialStatus(cells[2]);
    r.obj_minus = ParseDouble(cells[3]);
    r.obj_plus = ParseDouble(cells[4]);
    r.obj_exact = ParseDouble(cells[5]);
    r.exact_kind = ParseExactKind(cells[6]);
    r.lift_feasible_minus = ParseBool(cells[7]);
    r.lift_violation = ParseDouble(cells[8]);
    r.sandwich_lower = ParseBool(cells[9]);
    r.sandwich_upper = ParseBool(cells[10]);
    r.gap_observed = ParseDouble(cells[11]);
    r.gap_bound = ParseDouble(cells[12]);
    r.gap_within_bound = ParseBool(cells[13]);
    r.full_original = ParseDouble(cells[14]);
    r.full_projected = ParseDouble(cells[15]);
    r.fullness_gap_ok = ParseBool(cells[16]);
    r.t_generate = ParseDouble(cells[17]);
    r.t_project = ParseDouble(cells[18]);
    r.t_solve_minus = ParseDouble(cells[19]);
    r.t_solve_plus = ParseDouble(cells[20]);
    r.t_solve_exact = ParseDouble(cells[21]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string SummaryToJson(const ExperimentSummary& summary,
                          const ExperimentConfig* config) {
  Json out;
  out["version"] = std::string(kVersion);
  out["counts"] = {{"trials", summary.trials},
                   {"completed", summary.completed},
                   {"projected_infeasible", summary.projected_infeasible},
                   {"solver_failure", summary.solver_failure}};
  out["failure_stages"] = summary.failure_stages;
  out["frequencies"] = {
      {"lift_feasible_minus", FrequencyJson(summary.lift_feasible_minus)},
      {"sandwich_lower", FrequencyJson(summary.sandwich_lower)},
      {"sandwich_lower_feasible_lift",
       FrequencyJson(summary.sandwich_lower_feasible_lift)},
      {"sandwich_upper", FrequencyJson(summary.sandwich_upper)},
      {"gap_within_bound", FrequencyJson(summary.gap_within_bound)},
      {"fullness_gap_ok", FrequencyJson(summary.fullness_gap_ok)}};
  out["means"] = {{"gap_observed", summary.mean_gap_observed},
                  {"gap_bound", summary.mean_gap_bound}};
  out["maxima"] = {{"gap_observed", summary.max_gap_observed},
                   {"gap_bound", summary.max_gap_bound},
                   {"lift_violation", summary.max_lift_violation}};
  out["wall_time"] = summary.wall_time;
  if (config != nullptr) {
    out["config"] = Json::parse(ExperimentConfigToJson(*config));
    BoundsConfig bounds = config->bounds;
    bounds.delta = config->delta;
    bounds.epsilon = config->epsilon;
    Json regime;
    if (config->m >= 1) {
      regime["min_projected_dim"] = MinProjectedDim(config->m, bounds);
    }
    regime["min_ambient_dim"] = MinAmbientDim(config->d, bounds);
    regime["bound_slack"] = kBoundSlack;
    out["theorem_dimensions"] = regime;
  }
  return out.dump(2) + "\n";
}

void WriteExperiment(const ExperimentResult& result,
                     const ExperimentConfig& config, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot create directory {}: {}",
                                            out_dir, ec.message()));
  }
  const std::filesystem::path dir(out_dir);
  WriteTextFile((dir / "trials.csv").string(), TrialsToCsv(result.records));
  WriteTextFile((dir / "summary.json").string(),
                SummaryToJson(result.summary, &config));
}

}  // namespace trsketch
