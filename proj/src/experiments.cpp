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

#include "ifipm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "ifipm/io.hpp"

namespace ifipm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t ColumnOf(SystemKind kind) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    if (kTraceColumns[i] == kind) return i;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown system kind");
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseCell(const std::string& cell) {
  if (cell.empty() || cell == "nan") return kNaN;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError, "bad number '" + cell + "'");
  }
  if (used != cell.size()) throw Error(ErrorCode::kParseError, "bad number '" + cell + "'");
  return v;
}

std::string Cell(double v) { return std::isnan(v) ? std::string() : FormatDouble(v); }

std::string CsvEscape(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

double ConditionTrace::kappa(std::size_t row, SystemKind kind) const {
  return rows.at(row).kappa[ColumnOf(kind)];
}

ConditionTrace RunConditionTrace(const PreprocessedProgram& prep, const Iterate& start,
                                 const IpmParams& params,
                                 const std::vector<SystemKind>& systems) {
  ConditionTrace trace;
  trace.systems = systems;
  const double beta = params.BetaFor(prep.base.cols());
  auto observe = [&](int k, const Iterate& it, const AssembledSystem& driving) {
    ConditionTraceRow row;
    row.k = k;
    row.mu = it.mu();
    row.kappa.fill(kNaN);
    for (SystemKind kind : systems) {
      double kappa = kNaN;
      try {
        kappa = kind == driving.kind ? ConditionNumber(driving)
                                     : ConditionNumber(Assemble(kind, it, prep, beta));
      } catch (const Error&) {
        kappa = std::numeric_limits<double>::infinity();
      }
      row.kappa[ColumnOf(kind)] = kappa;
    }
    trace.rows.push_back(row);
  };
  IfIpm(prep, start, params, observe);
  return trace;
}

std::string ConditionTraceToCsv(const ConditionTrace& trace) {
  std::ostringstream os;
  os << "k,mu";
  for (SystemKind kind : kTraceColumns) os << ",kappa_" << SystemKindName(kind);
  os << "\n";
  for (const ConditionTraceRow& row : trace.rows) {
    os << row.k << "," << FormatDouble(row.mu);
    for (double v : row.kappa) os << "," << Cell(v);
    os << "\n";
  }
  return os.str();
}

ConditionTrace ParseConditionTraceCsv(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kParseError, "empty trace");
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() != 2 + kTraceColumns.size() || header[0] != "k" || header[1] != "mu") {
    throw Error(ErrorCode::kParseError, "unexpected trace header");
  }
  ConditionTrace trace;
  std::array<bool, 6> seen{};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "trace row has " + std::to_string(cells.size()) +
                                              " cells");
    }
    ConditionTraceRow row;
    row.k = static_cast<int>(ParseCell(cells[0]));
    row.mu = ParseCell(cells[1]);
    for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
      row.kappa[i] = ParseCell(cells[2 + i]);
      if (!std::isnan(row.kappa[i])) seen[i] = true;
    }
    trace.rows.push_back(row);
  }
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    if (seen[i]) trace.systems.push_back(kTraceColumns[i]);
  }
  return trace;
}

double MuRatioViolation(const ConditionTrace& trace, double beta, double eta,
                        double theta) {
  const double band = eta / std::sqrt(1.0 + theta);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    const double ratio = trace.rows[i].mu / trace.rows[i - 1].mu;
    worst = std::max({worst, (beta - band) - ratio, ratio - (beta + band)});
  }
  return worst;
}

double SlopeFit(const ConditionTrace& trace, SystemKind column, double mu_lo,
                double mu_hi) {
  const std::size_t col = ColumnOf(column);
  std::vector<double> xs, ys;
  for (const ConditionTraceRow& row : trace.rows) {
    const double kappa = row.kappa[col];
    if (row.mu < mu_lo || row.mu > mu_hi || !std::isfinite(kappa) || kappa <= 0.0) continue;
    xs.push_back(std::log(1.0 / row.mu));
    ys.push_back(std::log(kappa));
  }
  if (xs.size() < 4) {
    throw Error(ErrorCode::kInsufficientData,
                "slope fit needs 4 rows, got " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= 0.0) throw Error(ErrorCode::kInsufficientData, "mu range is degenerate");
  return sxy / sxx;
}

double TailSpread(const ConditionTrace& trace, SystemKind column, std::size_t count) {
  const std::size_t col = ColumnOf(column);
  if (count == 0 || trace.rows.size() < count) {
    throw Error(ErrorCode::kInsufficientData, "trace shorter than the requested tail");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = trace.rows.size() - count; i < trace.rows.size(); ++i) {
    lo = std::min(lo, trace.rows[i].kappa[col]);
    hi = std::max(hi, trace.rows[i].kappa[col]);
  }
  return (hi - lo) / lo;
}

int BatchSummary::solved_count() const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [](const BatchRow& r) { return r.solved; }));
}

double BatchSummary::mean_final_gap() const {
  double sum = 0.0;
  int count = 0;
  for (const BatchRow& r : rows) {
    if (!r.solved) continue;
    sum += r.final_gap;
    ++count;
  }
  return count == 0 ? kNaN : sum / count;
}

namespace {

struct BatchJob {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::filesystem::path path;
};

double MaxOf(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::max(a, b);
}

void RunJob(const BatchConfig& config, const BatchJob& job, BatchRow& row) {
  std::optional<GeneratedInstance> generated;
  std::optional<InstanceFile> file;
  if (job.seed) {
    GeneratorSpec spec = config.spec;
    spec.seed = *job.seed;
    generated = Generate(spec);
  } else {
    file = ReadInstance(job.path);
    if (!file->interior) {
      throw Error(ErrorCode::kInvalidArgument, "instance has no interior starting point");
    }
  }
  const LinearProgram& lp = generated ? generated->lp : file->lp;
  const Iterate& start = generated ? generated->start : *file->interior;
  const PreprocessedProgram prep =
      Preprocess(lp, generated ? std::nullopt : file->basis);
  IpmParams params = config.params;
  params.track_condition = true;
  params.solver.seed = job.seed.value_or(params.solver.seed);

  Iterate final_iterate;
  if (config.zeta_hat) {
    RefinementResult res = IrIfIpm(prep, start, params.zeta, *config.zeta_hat, params);
    row.iterations = res.total_iterations;
    row.outer_loops = static_cast<int>(res.loops.size());
    for (const RefinementLoop& loop : res.loops) row.max_kappa = MaxOf(row.max_kappa, loop.max_kappa);
    final_iterate = std::move(res.iterate);
  } else {
    IpmResult res = IfIpm(prep, start, params);
    row.iterations = static_cast<int>(res.trace.records.size());
    row.outer_loops = 1;
    for (const IpmRecord& rec : res.trace.records) {
      row.max_kappa = MaxOf(row.max_kappa, rec.kappa_system);
    }
    final_iterate = std::move(res.iterate);
  }
  row.final_gap = final_iterate.x.dot(final_iterate.s) / static_cast<double>(lp.cols());
  row.solved = row.final_gap <= params.zeta;
}

}  // namespace

BatchSummary RunBatch(const BatchConfig& config) {
  std::vector<BatchJob> jobs;
  for (int i = 0; i < config.count; ++i) {
    const std::uint64_t seed = config.first_seed + static_cast<std::uint64_t>(i);
    jobs.push_back({"seed-" + std::to_string(seed), seed, {}});
  }
  for (const auto& path : config.instance_paths) {
    jobs.push_back({path.filename().string(), std::nullopt, path});
  }

  BatchSummary summary;
  summary.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      BatchRow& row = summary.rows[i];
      row.name = jobs[i].name;
      const auto begin = std::chrono::steady_clock::now();
      try {
        RunJob(config, jobs[i], row);
      } catch (const std::exception& e) {
        row.solved = false;
        row.error = e.what();
      }
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    }
  };
  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  return summary;
}

std::string BatchSummaryToCsv(const BatchSummary& summary) {
  std::ostringstream os;
  os << "name,solved,iterations,outer_loops,final_gap,max_kappa,error\n";
  for (const BatchRow& r : summary.rows) {
    os << CsvEscape(r.name) << "," << (r.solved ? 1 : 0) << "," << r.iterations << ","
       << r.outer_loops << "," << Cell(r.final_gap) << "," << Cell(r.max_kappa) << ","
       << CsvEscape(r.error) << "\n";
  }
  os << "TOTAL," << summary.solved_count() << "/" << summary.rows.size() << ",,,"
     << Cell(summary.mean_final_gap()) << ",,\n";
  return os.str();
}

std::string BatchTimingsToCsv(const BatchSummary& summary) {
  std::ostringstream os;
  os << "name,wall_seconds\n";
  for (const BatchRow& r : summary.rows) {
    os << CsvEscape(r.name) << "," << FormatDouble(r.wall_seconds) << "\n";
  }
  return os.str();
}

std::string IpmTraceToCsv(const IpmTrace& trace) {
  std::ostringstream os;
  os << "k,mu,kappa,target_residual,achieved_residual,solver_iterations,dx_dot_ds,"
        "dx_norm,ds_norm,sv_inf,mu_ratio,in_neighborhood,primal_inf,dual_inf\n";
  for (const IpmRecord& r : trace.records) {
    os << r.k << "," << FormatDouble(r.mu) << "," << Cell(r.kappa_system) << ","
       << FormatDouble(r.target_residual) << "," << FormatDouble(r.achieved_residual) << ","
       << r.solver_iterations << "," << FormatDouble(r.dx_dot_ds) << ","
       << FormatDouble(r.dx_norm) << "," << FormatDouble(r.ds_norm) << ","
       << FormatDouble(r.sv_inf) << "," << FormatDouble(r.mu_ratio) << ","
       << (r.in_neighborhood ? 1 : 0) << "," << FormatDouble(r.primal_inf) << ","
       << FormatDouble(r.dual_inf) << "\n";
  }
  return os.str();
}

}  // namespace ifipm
