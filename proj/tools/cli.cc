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

#include "cli.h"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "trsketch/bounds.h"
#include "trsketch/errors.h"
#include "trsketch/experiment.h"
#include "trsketch/instance_io.h"
#include "trsketch/linalg.h"
#include "trsketch/model.h"
#include "trsketch/projector.h"
#include "trsketch/rng.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

// Runtime failure with a message, mapped to exit code 2.
struct Failure {
  std::string message;
};

void Emit(const std::string& content, const std::string& path,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    WriteTextFile(path, content);
  }
}

struct GenerateArgs {
  GeneratorOptions options;
  std::string model = "linear";
  std::string signature = "psd";
  std::string id;
  std::string out;
};

struct ProjectArgs {
  std::string in;
  int d = 0;
  double eps = 0.1;
  std::string direction = "minus";
  std::string convention = "inv-sqrt-n";
  uint64_t seed = 1;
  std::string out;
  std::string projector_out;
};

struct SolveArgs {
  std::string in;
  bool projected = false;
  std::string method = "convex";
  double tol = 1e-9;
  int starts = 8;
  uint64_t seed = 1;
  double grid_step = 0.01;
  std::string out;
};

struct FullnessArgs {
  std::string in;
  bool projected = false;
  double tol = 1e-9;
  std::string method = "min-norm";
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
  int threads = -1;
};

struct LemmaArgs {
  int n = 1000;
  int d = 200;
  double eps = 0.3;
  std::string convention = "inv-sqrt-d";
  int trials = 1000;
  int pairs = 0;
  int rows = 50;
  int rank = 5;
  int matrices = 10;
  uint64_t seed = 1;
};

struct ReportArgs {
  std::string csv;
  std::string out;
};

// Loads either an original or a projected instance and keeps it alive.
struct LoadedProblem {
  std::optional<TrsInstance> instance;
  std::optional<ProjectedInstance> projected;

  ProblemView View() const {
    return instance ? instance->View() : projected->View();
  }
  int m() const {
    return instance ? instance->m()
                    : static_cast<int>(projected->constraints.rows());
  }
};

LoadedProblem Load(const std::string& path, bool projected) {
  LoadedProblem problem;
  if (projected) {
    problem.projected = ProjectedFromJson(ReadTextFile(path));
  } else {
    problem.instance = LoadInstance(path);
  }
  return problem;
}

int RunGenerate(GenerateArgs& args, std::ostream& out) {
  args.options.kind = ParseModelKind(args.model);
  args.options.signature = ParseSignature(args.signature);
  TrsInstance instance = GenerateInstance(args.options);
  instance.id = args.id.empty() ? fmt::format("gen-{}", args.options.seed)
                                : args.id;
  Emit(InstanceToJson(instance), args.out, out);
  return kExitOk;
}

int RunProject(const ProjectArgs& args, std::ostream& out, std::ostream& err) {
  TrsInstance instance = LoadInstance(args.in);
  if (!instance.normalized) {
    const NormalizedInstance normalized = Normalize(instance);
    instance = normalized.instance;
    err << "note: instance normalized before projection\n";
  }
  const Projector projector = Projector::Sample(
      instance.n(), args.d, ParseScalingConvention(args.convention), args.seed);
  const ProjectedInstance projected = BuildProjected(
      instance, projector, args.eps, ParseDirection(args.direction));
  if (!args.projector_out.empty()) SaveProjector(projector, args.projector_out);
  Emit(ProjectedToJson(projected), args.out, out);
  return kExitOk;
}

int RunSolve(const SolveArgs& args, std::ostream& out) {
  const LoadedProblem problem = Load(args.in, args.projected);
  const ProblemView view = problem.View();
  SolveReport report;
  if (args.method == "convex") {
    ConvexSolverOptions options;
    options.tolerance = args.tol;
    report = SolveConvex(view, options);
  } else if (args.method == "local") {
    LocalSolverOptions options;
    options.tolerance = args.tol;
    options.starts = args.starts;
    options.seed = args.seed;
    report = SolveLocal(view, options);
  } else if (args.method == "ball-qp") {
    if (problem.m() > 0) throw Failure{"ball-qp requires m=0"};
    const Eigen::MatrixXd empty;
    report = SolveBallQp(view.has_quadratic() ? *view.quadratic : empty,
                         *view.linear, view.radius);
  } else {
    report = SolveOracleSmall(view, args.grid_step);
  }
  Emit(SolveReportToJson(report), args.out, out);
  return kExitOk;
}

int RunFullness(const FullnessArgs& args, std::ostream& out) {
  const LoadedProblem problem = Load(args.in, args.projected);
  FullnessOptions options;
  options.tolerance = args.tol;
  options.method = args.method == "alternating"
                       ? FullnessMethod::kAlternatingProjections
                       : FullnessMethod::kMinNormPoint;
  Emit(FullnessToJson(Fullness(problem.View(), options)), args.out, out);
  return kExitOk;
}

std::string FrequencyLine(const char* name, const Frequency& f) {
  return fmt::format("{}: {}/{} = {:.4f}\n", name, f.hits, f.denominator,
                     f.value());
}

void PrintSummary(const ExperimentSummary& s, std::ostream& out) {
  out << fmt::format(
      "trials={} completed={} projected_infeasible={} solver_failure={}\n",
      s.trials, s.completed, s.projected_infeasible, s.solver_failure);
  out << FrequencyLine("lift_feasible_minus", s.lift_feasible_minus);
  out << FrequencyLine("sandwich_lower", s.sandwich_lower);
  out << FrequencyLine("sandwich_upper", s.sandwich_upper);
  out << FrequencyLine("gap_within_bound", s.gap_within_bound);
  out << FrequencyLine("fullness_gap_ok", s.fullness_gap_ok);
}

int RunExperimentCommand(const ExperimentArgs& args, std::ostream& out) {
  ExperimentConfig config = ExperimentConfigFromJson(ReadTextFile(args.config));
  if (args.threads >= 0) config.threads = args.threads;
  const ExperimentResult result = RunExperiment(config);
  WriteExperiment(result, config, args.out_dir);
  PrintSummary(result.summary, out);
  return kExitOk;
}

std::string ReportLine(const char* name, const PropertyCheckReport& r) {
  return fmt::format(
      "{}: trials={} satisfied={} fraction={:.4f} eps={} worst={:.6g}\n", name,
      r.trials, r.satisfied, r.fraction, r.epsilon, r.worst_violation);
}

int RunCheckLemmas(const LemmaArgs& args, std::ostream& out) {
  if (args.trials < 1 || args.matrices < 1 || args.rows < 1 || args.rank < 1 ||
      args.rank > args.n) {
    throw Error(ErrorCode::kInvalidInput,
                "need trials, matrices and rows >= 1 and 1 <= rank <= n");
  }
  const Projector projector =
      Projector::Sample(args.n, args.d, ParseScalingConvention(args.convention),
                        args.seed);
  const int pairs = args.pairs > 0 ? args.pairs : 10 * args.trials;
  out << fmt::format("projector: n={} d={} convention={} seed={}\n", args.n,
                     args.d, args.convention, args.seed);
  out << fmt::format("gram_deviation: {:.6g}\n", GramDeviation(projector).value);
  out << ReportLine("norm_preservation",
                    CheckNormPreservation(
                        projector,
                        SampleUnitVectors(args.n, args.trials,
                                          DeriveSeed(args.seed, 1)),
                        args.eps));
  out << ReportLine(
      "inner_product",
      CheckInnerProduct(projector,
                        SampleUnitPairs(args.n, pairs, DeriveSeed(args.seed, 2)),
                        args.eps));
  Rng rng(DeriveSeed(args.seed, 3));
  Eigen::MatrixXd rows = rng.GaussianMatrix(args.rows, args.n);
  rows.rowwise().normalize();
  out << ReportLine(
      "linear_map",
      CheckLinearMap(projector, rows,
                     SampleUnitVectors(args.n, args.trials,
                                       DeriveSeed(args.seed, 4)),
                     args.eps));
  PropertyCheckReport quadratic;
  quadratic.epsilon = args.eps;
  const int per_matrix = std::max(1, args.trials / args.matrices);
  for (int k = 0; k < args.matrices; ++k) {
    const uint64_t stream = DeriveSeed(args.seed, 100 + k);
    const Eigen::MatrixXd basis =
        RandomOrthonormalColumns(args.n, args.rank, DeriveSeed(stream, 1));
    Rng spectrum(DeriveSeed(stream, 2));
    Eigen::VectorXd sigma(args.rank);
    sigma(0) = 1.0;
    for (int i = 1; i < args.rank; ++i) sigma(i) = spectrum.Uniform();
    const Eigen::MatrixXd q = basis * sigma.asDiagonal() * basis.transpose();
    const PropertyCheckReport part = CheckQuadraticForm(
        projector, q, SampleUnitPairs(args.n, per_matrix, DeriveSeed(stream, 3)),
        args.eps);
    quadratic.trials += part.trials;
    quadratic.satisfied += part.satisfied;
    quadratic.worst_violation =
        std::max(quadratic.worst_violation, part.worst_violation);
  }
  quadratic.fraction =
      static_cast<double>(quadratic.satisfied) / quadratic.trials;
  out << ReportLine("quadratic_form", quadratic);
  return kExitOk;
}

int RunReport(const ReportArgs& args, std::ostream& out) {
  const std::vector<TrialRecord> records = TrialsFromCsv(ReadTextFile(args.csv));
  const ExperimentSummary summary = Summarize(records);
  if (args.out.empty()) {
    PrintSummary(summary, out);
  } else {
    WriteTextFile(args.out, SummaryToJson(summary, nullptr));
  }
  return kExitOk;
}

}  // namespace

int CliDispatch(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Random-projection experiments for trust-region subproblems",
               "trsketch"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenerateArgs generate;
  CLI::App* cmd_generate = app.add_subcommand("generate", "Write a random instance as JSON");
  cmd_generate->add_option("--n", generate.options.n, "Dimension")->required();
  cmd_generate->add_option("--m", generate.options.m, "Constraint count")->required();
  cmd_generate->add_option("--model", generate.model)
      ->check(CLI::IsMember({"linear", "quadratic"}));
  cmd_generate->add_option("--rank", generate.options.rank, "Rank of Q");
  cmd_generate->add_option("--fullness-target", generate.options.fullness_target);
  cmd_generate->add_option("--seed", generate.options.seed);
  cmd_generate->add_option("--norm-c", generate.options.norm_c);
  cmd_generate->add_option("--signature", generate.signature)
      ->check(CLI::IsMember({"psd", "indefinite"}));
  cmd_generate->add_option("--margin-scale", generate.options.margin_scale);
  cmd_generate->add_option("--id", generate.id);
  cmd_generate->add_option("--out", generate.out, "Output path (default stdout)");

  ProjectArgs project;
  CLI::App* cmd_project = app.add_subcommand("project", "Build a projected instance");
  cmd_project->add_option("--in", project.in)->required();
  cmd_project->add_option("--d", project.d)->required();
  cmd_project->add_option("--eps", project.eps);
  cmd_project->add_option("--direction", project.direction)
      ->check(CLI::IsMember({"minus", "plus"}));
  cmd_project->add_option("--convention", project.convention)
      ->check(CLI::IsMember({"inv-sqrt-n", "inv-sqrt-d", "orthonormal-rows"}));
  cmd_project->add_option("--seed", project.seed);
  cmd_project->add_option("--out", project.out);
  cmd_project->add_option("--projector-out", project.projector_out,
                          "Also write the sampled projector (binary)");

  SolveArgs solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve an instance");
  cmd_solve->add_option("--in", solve.in)->required();
  cmd_solve->add_flag("--projected", solve.projected, "Input is a projected instance");
  cmd_solve->add_option("--method", solve.method)
      ->check(CLI::IsMember({"convex", "local", "ball-qp", "grid"}));
  cmd_solve->add_option("--tol", solve.tol);
  cmd_solve->add_option("--starts", solve.starts);
  cmd_solve->add_option("--seed", solve.seed);
  cmd_solve->add_option("--grid-step", solve.grid_step);
  cmd_solve->add_option("--out", solve.out);

  FullnessArgs fullness;
  CLI::App* cmd_fullness = app.add_subcommand("fullness", "Largest inscribed ball");
  cmd_fullness->add_option("--in", fullness.in)->required();
  cmd_fullness->add_flag("--projected", fullness.projected);
  cmd_fullness->add_option("--tol", fullness.tol);
  cmd_fullness->add_option("--method", fullness.method)
      ->check(CLI::IsMember({"min-norm", "alternating"}));
  cmd_fullness->add_option("--out", fullness.out);

  ExperimentArgs experiment;
  CLI::App* cmd_experiment = app.add_subcommand("experiment", "Run a Monte-Carlo experiment");
  cmd_experiment->add_option("--config", experiment.config)->required();
  cmd_experiment->add_option("--out-dir", experiment.out_dir)->required();
  cmd_experiment->add_option("--threads", experiment.threads,
                             "Override the configured thread count");

  LemmaArgs lemmas;
  CLI::App* cmd_lemmas = app.add_subcommand("check-lemmas", "Projector property checks");
  cmd_lemmas->add_option("--n", lemmas.n);
  cmd_lemmas->add_option("--d", lemmas.d);
  cmd_lemmas->add_option("--eps", lemmas.eps);
  cmd_lemmas->add_option("--convention", lemmas.convention)
      ->check(CLI::IsMember({"inv-sqrt-n", "inv-sqrt-d", "orthonormal-rows"}));
  cmd_lemmas->add_option("--trials", lemmas.trials);
  cmd_lemmas->add_option("--pairs", lemmas.pairs, "Inner-product pairs (default 10 x trials)");
  cmd_lemmas->add_option("--rows", lemmas.rows, "Unit rows for the linear-map check");
  cmd_lemmas->add_option("--rank", lemmas.rank);
  cmd_lemmas->add_option("--matrices", lemmas.matrices);
  cmd_lemmas->add_option("--seed", lemmas.seed);

  ReportArgs report;
  CLI::App* cmd_report = app.add_subcommand("report", "Summarize a trials CSV");
  cmd_report->add_option("--csv", report.csv)->required();
  cmd_report->add_option("--out", report.out, "Write summary JSON here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* context = &app;
    for (CLI::App* sub : app.get_subcommands()) context = sub;
    err << context->help();
    return kExitUsage;
  }

  try {
    if (cmd_generate->parsed()) return RunGenerate(generate, out);
    if (cmd_project->parsed()) return RunProject(project, out, err);
    if (cmd_solve->parsed()) return RunSolve(solve, out);
    if (cmd_fullness->parsed()) return RunFullness(fullness, out);
    if (cmd_experiment->parsed()) return RunExperimentCommand(experiment, out);
    if (cmd_lemmas->parsed()) return RunCheckLemmas(lemmas, out);
    if (cmd_report->parsed()) return RunReport(report, out);
  } catch (const Failure& failure) {
    err << "error: " << failure.message << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace trsketch
