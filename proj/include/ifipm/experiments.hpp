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

// Experiment drivers behind the command-line tool: condition-number traces,
// power-law slope fits and batch statistics. CSV output has a fixed column
// order, 17 significant digits and LF line endings; the layout can be fed to
// gnuplot directly (`plot 'trace.csv' using 2:5 with lines`, with
// `set datafile separator ','` and log scales).

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ifipm/generator.hpp"
#include "ifipm/ipm.hpp"

namespace ifipm {

// Column order of the condition trace CSV after k and mu.
inline constexpr std::array<SystemKind, 6> kTraceColumns = {
    SystemKind::kFNS, SystemKind::kAS, SystemKind::kNES,
    SystemKind::kOSS, SystemKind::kMNES, SystemKind::kPNES};

struct ConditionTraceRow {
  int k = 0;
  double mu = 0.0;
  // Indexed like kTraceColumns; NaN for systems not requested.
  std::array<double, 6> kappa;
};

struct ConditionTrace {
  std::vector<SystemKind> systems;
  std::vector<ConditionTraceRow> rows;

  double kappa(std::size_t row, SystemKind kind) const;
};

// Runs IfIpm once with params.system driving the steps and records kappa of
// every requested system at every iterate.
ConditionTrace RunConditionTrace(const PreprocessedProgram& prep, const Iterate& start,
                                 const IpmParams& params,
                                 const std::vector<SystemKind>& systems);

std::string ConditionTraceToCsv(const ConditionTrace& trace);
ConditionTrace ParseConditionTraceCsv(std::string_view text);

// Largest violation of beta - eta/sqrt(1+theta) <= mu_{k+1}/mu_k
// <= beta + eta/sqrt(1+theta) over consecutive rows; <= 0 means all rows
// pass. Rows are assumed to be consecutive iterations.
double MuRatioViolation(const ConditionTrace& trace, double beta, double eta,
                        double theta);

// Least-squares slope of log(kappa) against log(1/mu) over rows with
// mu in [mu_lo, mu_hi]. Throws kInsufficientData with fewer than 4 rows.
double SlopeFit(const ConditionTrace& trace, SystemKind column, double mu_lo,
                double mu_hi);

// (max - min) / min of kappa over the last `count` rows.
double TailSpread(const ConditionTrace& trace, SystemKind column, std::size_t count = 5);

struct BatchConfig {
  GeneratorSpec spec;           // seed field ignored; see first_seed
  std::uint64_t first_seed = 0;
  int count = 0;                // generated instances
  std::vector<std::filesystem::path> instance_paths;  // loaded instances
  IpmParams params;
  std::optional<double> zeta_hat;  // enables outer refinement to params.zeta
  int workers = 1;
};

struct BatchRow {
  std::string name;
  bool solved = false;
  std::string error;
  int iterations = 0;
  int outer_loops = 0;
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  double max_kappa = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
};

struct BatchSummary {
  std::vector<BatchRow> rows;

  int solved_count() const;
  double mean_final_gap() const;  // over solved rows
};

BatchSummary RunBatch(const BatchConfig& config);

// Deterministic summary: per-instance rows plus an aggregate row. Wall time is
// kept out of this file; see BatchTimingsToCsv.
std::string BatchSummaryToCsv(const BatchSummary& summary);
std::string BatchTimingsToCsv(const BatchSummary& summary);

std::string IpmTraceToCsv(const IpmTrace& trace);

}  // namespace ifipm
