// Copyright 2026 The ifipm Authors
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

// ifipm generate | solve | trace | batch
//
// Exit status: 0 success, 1 solver failure, 2 input error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifipm/experiments.hpp"
#include "ifipm/generator.hpp"
#include "ifipm/io.hpp"
#include "ifipm/ipm.hpp"

namespace {

using namespace ifipm;

constexpr int kExitSolver = 1;
constexpr int kExitInput = 2;

struct Options {
  std::vector<std::string> instances;
  std::string out;
  std::string system = "mnes";
  std::string solver = "exact";
  double zeta = 1e-6;
  std::optional<double> zeta_hat;
  double theta = 0.4;
  double eta = 0.1;
  std::uint64_t seed = 0;
  Index m = 10;
  Index n = 20;
  double kappa = 10.0;
  bool degenerate = false;
  std::string mode;  // central-start unless --degenerate
  int count = 20;
  int workers = 1;
};

void AddGeneratorFlags(CLI::App* app, Options& o) {
  app->add_option("--m", o.m, "Rows")->check(CLI::PositiveNumber);
  app->add_option("--n", o.n, "Columns")->check(CLI::PositiveNumber);
  app->add_option("--kappa", o.kappa, "Target condition number of A")->check(CLI::Range(1.0, 1e12));
  app->add_flag("--degenerate", o.degenerate, "Primal degenerate optimum");
  app->add_option("--mode", o.mode, "central-start | known-optimal (default with --degenerate)");
  app->add_option("--seed", o.seed, "Random seed");
}

void AddSolveFlags(CLI::App* app, Options& o) {
  app->add_option("--system", o.system, "fns | as | nes | mnes | oss | pnes");
  app->add_option("--solver", o.solver, "exact | cg | pcg | oracle | refine");
  app->add_option("--zeta", o.zeta, "Target duality measure");
  app->add_option("--zeta-hat", o.zeta_hat, "Per-loop precision of outer refinement");
  app->add_option("--theta", o.theta, "Neighborhood radius");
  app->add_option("--eta", o.eta, "Inexactness parameter");
}

GeneratorSpec MakeSpec(const Options& o) {
  GeneratorSpec spec;
  spec.m = o.m;
  spec.n = o.n;
  spec.kappa_target = o.kappa;
  spec.degenerate = o.degenerate;
  spec.mode = !o.mode.empty()  ? ParseGeneratorMode(o.mode)
              : o.degenerate ? GeneratorMode::kKnownOptimal
                             : GeneratorMode::kCentralStart;
  if (spec.degenerate && spec.mode != GeneratorMode::kKnownOptimal) {
    throw Error(ErrorCode::kInvalidArgument, "--degenerate needs --mode known-optimal");
  }
  spec.seed = o.seed;
  return spec;
}

IpmParams MakeParams(const Options& o) {
  IpmParams p;
  p.theta = o.theta;
  p.eta = o.eta;
  p.zeta = o.zeta;
  p.system = ParseSystemKind(o.system);
  p.solver.method = ParseSolveMethod(o.solver);
  p.solver.seed = o.seed;
  p.accept_unverified = true;
  return p;
}

void WarnParameters(Index n, const IpmParams& p) {
  const ParameterCheck check = CheckParameters(n, p.theta, p.eta, p.BetaFor(n));
  if (!check.ok()) {
    std::cerr << "warning: theta=" << p.theta << " eta=" << p.eta
              << " fail the convergence conditions (con1 " << check.con1_lhs << " <= "
              << check.con1_rhs << ", con2 " << check.con2_lhs << " <= " << check.con2_rhs
              << ")\n";
  }
}

struct Loaded {
  PreprocessedProgram prep;
  Iterate start;
};

Loaded LoadOrGenerate(const Options& o) {
  if (o.instances.size() > 1) {
    throw Error(ErrorCode::kInvalidArgument, "expected a single --instance");
  }
  if (o.instances.empty()) {
    GeneratedInstance inst = Generate(MakeSpec(o));
    return {Preprocess(inst.lp), std::move(inst.start)};
  }
  InstanceFile file = ReadInstance(o.instances.front());
  if (!file.interior) {
    throw Error(ErrorCode::kInvalidArgument, "instance has no 'interior' starting point");
  }
  return {Preprocess(file.lp, file.basis), std::move(*file.interior)};
}

std::filesystem::path Sidecar(const std::string& out, const char* suffix) {
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

int CmdGenerate(const Options& o) {
  const GeneratedInstance inst = Generate(MakeSpec(o));
  const CertReport cert = Certify(inst);
  for (const CertCheck& c : cert.checks) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << " " << FormatDouble(c.value) << "\n";
  }
  if (o.out.empty()) {
    std::cout << InstanceToJson(FromGenerated(inst));
  } else {
    WriteInstance(o.out, FromGenerated(inst));
  }
  return cert.passed() ? 0 : kExitSolver;
}

int CmdSolve(const Options& o) {
  const Loaded in = LoadOrGenerate(o);
  const IpmParams params = MakeParams(o);
  WarnParameters(in.prep.base.cols(), params);
  Iterate solution;
  std::string trace_csv;
  int iterations = 0;
  int loops = 1;
  if (o.zeta_hat) {
    const RefinementResult res = IrIfIpm(in.prep, in.start, o.zeta, *o.zeta_hat, params);
    solution = res.iterate;
    iterations = res.total_iterations;
    loops = static_cast<int>(res.loops.size());
    std::ostringstream os;
    os << "loop,scale,gap_before,gap_after,contraction,ipm_iterations\n";
    for (const RefinementLoop& l : res.loops) {
      os << l.loop << "," << FormatDouble(l.scale) << "," << FormatDouble(l.gap_before) << ","
         << FormatDouble(l.gap_after) << "," << FormatDouble(l.contraction) << ","
         << l.ipm_iterations << "\n";
    }
    trace_csv = os.str();
  } else {
    const IpmResult res = IfIpm(in.prep, in.start, params);
    solution = res.iterate;
    iterations = static_cast<int>(res.trace.records.size());
    trace_csv = IpmTraceToCsv(res.trace);
  }
  const LinearProgram& lp = in.prep.base;
  const double mu = solution.mu();
  const ResidualReport res = Residuals(lp, solution);
  std::cout << "iterations " << iterations << "\nouter_loops " << loops << "\nmu "
            << FormatDouble(mu) << "\nobjective " << FormatDouble(lp.c().dot(solution.x))
            << "\nprimal_inf " << FormatDouble(res.primal_inf) << "\ndual_inf "
            << FormatDouble(res.dual_inf) << "\n";
  if (!o.out.empty()) {
    WriteTextFile(o.out, IterateToJson(solution));
    WriteTextFile(Sidecar(o.out, ".trace.csv"), trace_csv);
  }
  return 0;
}

int CmdTrace(const Options& o) {
  const Loaded in = LoadOrGenerate(o);
  const IpmParams params = MakeParams(o);
  WarnParameters(in.prep.base.cols(), params);
  const std::vector<SystemKind> systems(kTraceColumns.begin(), kTraceColumns.end());
  const ConditionTrace trace = RunConditionTrace(in.prep, in.start, params, systems);
  const std::string csv = ConditionTraceToCsv(trace);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    WriteTextFile(o.out, csv);
  }
  return 0;
}

int CmdBatch(const Options& o) {
  BatchConfig config;
  config.spec = MakeSpec(o);
  config.first_seed = o.seed;
  config.count = o.count;
  for (const std::string& p : o.instances) config.instance_paths.emplace_back(p);
  config.params = MakeParams(o);
  config.zeta_hat = o.zeta_hat;
  config.workers = o.workers;
  const BatchSummary summary = RunBatch(config);
  const std::string csv = BatchSummaryToCsv(summary);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    WriteTextFile(o.out, csv);
    WriteTextFile(Sidecar(o.out, ".timings.csv"), BatchTimingsToCsv(summary));
  }
  std::cerr << summary.solved_count() << "/" << summary.rows.size() << " solved\n";
  return 0;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kDimensionOrder:
    case ErrorCode::kNonFinite:
    case ErrorCode::kSingularBasis:
    case ErrorCode::kParseError:
    case ErrorCode::kIo:
    case ErrorCode::kTooLarge:
      return kExitInput;
    default:
      return kExitSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact-feasible interior point method for linear optimization"};
  app.require_subcommand(1);
  Options o;

  CLI::App* generate = app.add_subcommand("generate", "Write a random instance with certificates");
  AddGeneratorFlags(generate, o);
  generate->add_option("--out", o.out, "Instance JSON path (stdout if omitted)");

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
  AddGeneratorFlags(solve, o);
  AddSolveFlags(solve, o);
  solve->add_option("--instance", o.instances, "Instance JSON (generated if omitted)")
      ->expected(1);
  solve->add_option("--out", o.out, "Solution JSON path; the trace goes to <out>.trace.csv");

  CLI::App* trace = app.add_subcommand("trace", "Condition numbers of every system per iteration");
  AddGeneratorFlags(trace, o);
  AddSolveFlags(trace, o);
  trace->add_option("--instance", o.instances, "Instance JSON (generated if omitted)")
      ->expected(1);
  trace->add_option("--out", o.out, "CSV path (stdout if omitted)");

  CLI::App* batch = app.add_subcommand("batch", "Solve a seed range and/or instance files");
  AddGeneratorFlags(batch, o);
  AddSolveFlags(batch, o);
  batch->add_option("--count", o.count, "Generated instances, seeds seed..seed+count-1")
      ->check(CLI::NonNegativeNumber);
  batch->add_option("--instance", o.instances, "Additional instance JSON files");
  batch->add_option("--workers", o.workers, "Parallel workers")->check(CLI::PositiveNumber);
  batch->add_option("--out", o.out, "Summary CSV; timings go to <out>.timings.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (generate->parsed()) return CmdGenerate(o);
    if (solve->parsed()) return CmdSolve(o);
    if (trace->parsed()) return CmdTrace(o);
    return CmdBatch(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
