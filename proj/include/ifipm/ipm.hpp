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

// Short-step inexact-feasible interior point method and its outer iterative
// refinement driver.

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ifipm/newton.hpp"
#include "ifipm/problem.hpp"
#include "ifipm/solvers.hpp"

namespace ifipm {

struct ParameterCheck {
  bool con1 = false;  // beta <= 1 - (eta + 0.01)/sqrt(n)
  bool con2 = false;  // (theta^2 + n(1-beta)^2 + eta^2)/(2^{3/2}(1-theta)) + eta
                      //   <= theta (beta - eta/sqrt(n))
  double con1_lhs = 0.0;
  double con1_rhs = 0.0;
  double con2_lhs = 0.0;
  double con2_rhs = 0.0;

  bool ok() const { return con1 && con2; }
};

ParameterCheck CheckParameters(Index n, double theta, double eta, double beta);

struct IpmParams {
  double theta = 0.7;
  double eta = 0.1;
  std::optional<double> beta;  // default 1 - 0.2/sqrt(n)
  double zeta = 1e-2;
  SystemKind system = SystemKind::kMNES;
  LinearSolver solver;
  int max_iterations = 100000;
  // Run even if CheckParameters() fails. The verdict is still recorded.
  bool accept_unverified = false;
  // Norm in which the solver tolerance is enforced.
  ResidualNorm norm = ResidualNorm::kTwo;
  // Record kappa of the driving system at every iteration.
  bool track_condition = false;

  // theta = 0.7, eta = 0.1 as in the reference algorithm. This pair fails
  // the second parameter condition, so it carries accept_unverified.
  static IpmParams AlgorithmDefaults();
  // theta = 0.4, eta = 0.1: passes both conditions for every n >= 1.
  static IpmParams Validated();

  double BetaFor(Index n) const;
};

// Solver tolerance for the given system at duality measure mu.
//   MNES/PNES: (eta / sqrt(1+theta)) sqrt(mu)   on r-hat
//   OSS/FNS/AS: eta mu                          on the system residual
//   NES: eta mu min(sigma_min(A), 1/sigma_max(A)) / ||s||_inf
double SolveTolerance(const IpmParams& params, SystemKind kind, double mu,
                      double s_inf, double sigma_min_a, double sigma_max_a);

struct IpmRecord {
  int k = 0;
  double mu = 0.0;         // mu^k, before the step
  double kappa_system = std::numeric_limits<double>::quiet_NaN();
  double target_residual = 0.0;
  double achieved_residual = 0.0;
  int solver_iterations = 0;
  // Properties of the step and of the new iterate k+1.
  double dx_dot_ds = 0.0;
  double dx_norm = 0.0;
  double ds_norm = 0.0;
  double sv_inf = 0.0;
  double mu_ratio = 0.0;   // mu^{k+1} / mu^k
  bool in_neighborhood = false;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
};

struct IpmTrace {
  ParameterCheck parameters;
  double beta = 0.0;
  std::vector<IpmRecord> records;
};

struct IpmResult {
  Iterate iterate;
  IpmTrace trace;
};

// Called once per iteration with the current iterate and the system that
// drives the step.
using IpmObserver = std::function<void(int k, const Iterate&, const AssembledSystem&)>;

// Iterates x+ = x + dx etc. with full Newton steps until mu <= zeta.
// Errors: kInvalidArgument (start not in N(theta) / not feasible / bad
// parameters), kLeftNeighborhood, kMaxIterations, kSolverFailure.
IpmResult IfIpm(const PreprocessedProgram& prep, const Iterate& start,
                const IpmParams& params, const IpmObserver& observer = {});

struct RefinementLoop {
  int loop = 0;
  double scale = 0.0;        // 1 / (x^T s) of the iterate being refined
  double gap_before = 0.0;
  double gap_after = 0.0;
  double contraction = 0.0;  // gap_after / gap_before
  int ipm_iterations = 0;
  double max_kappa = std::numeric_limits<double>::quiet_NaN();  // if tracked
};

struct RefinementResult {
  Iterate iterate;
  std::vector<RefinementLoop> loops;
  int total_iterations = 0;
};

// Outer iterative refinement. The first loop solves (A, b, c) to mu <= zeta_hat.
// Each further loop solves the scaled residual problem (A, nabla b, nabla s)
// from (nabla x, 0, nabla s), nabla = 1/(x^T s), until its duality measure
// drops by the factor zeta_hat, then maps back:
//   x <- x + (x' - nabla x)/nabla,  y <- y + y'/nabla,  s <- c - A^T y.
// Stops when x^T s / n <= zeta. Throws kNoProgress if a loop contracts the
// gap by less than 2 zeta_hat.
RefinementResult IrIfIpm(const PreprocessedProgram& prep, const Iterate& start,
                         double zeta, double zeta_hat, const IpmParams& params,
                         int max_loops = 60);

}  // namespace ifipm
