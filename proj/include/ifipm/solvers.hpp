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

// Linear solvers with an explicit residual contract. Every report's
// achieved_residual is recomputed from the returned solution, never taken
// from the solver's own bookkeeping.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ifipm/error.hpp"
#include "ifipm/linalg.hpp"

namespace ifipm {

enum class ResidualNorm { kTwo, kInf };

enum class SolveMethod { kExact, kCG, kPCG, kOracle, kRefine };

std::string_view SolveMethodName(SolveMethod method);  // "exact", "cg", ...
SolveMethod ParseSolveMethod(std::string_view name);

struct SolveRequest {
  const Matrix& matrix;
  const Vector& rhs;
  double target_residual = 1e-10;
  ResidualNorm norm = ResidualNorm::kTwo;
  int max_iterations = 1000;
  std::optional<std::uint64_t> seed;
};

struct SolveReport {
  Vector solution;
  double achieved_residual = 0.0;
  int iterations = 0;
  SolveMethod method = SolveMethod::kExact;
  std::vector<double> residual_history;  // CG iterations / refinement loops
};

// Raised by iterative solvers that miss their target; carries the best
// iterate found.
class SolveFailure : public Error {
 public:
  SolveFailure(ErrorCode code, const std::string& message, SolveReport best)
      : Error(code, message), best_(std::move(best)) {}
  const SolveReport& best() const { return best_; }

 private:
  SolveReport best_;
};

double ResidualNormOf(const Matrix& matrix, const Vector& solution,
                      const Vector& rhs, ResidualNorm norm = ResidualNorm::kTwo);

// Cholesky for symmetric positive definite input, full-pivot LU otherwise,
// followed by one step of iterative refinement. Throws kSingularMatrix.
SolveReport SolveExact(const Matrix& matrix, const Vector& rhs);

using LinearOperator = std::function<Vector(const Vector&)>;

// Conjugate gradients (three-term recurrence, no re-orthogonalization).
// Stops when ||r|| <= target_residual. Throws SolveFailure with kNotConverged
// or kNotSPD.
SolveReport SolveCg(const SolveRequest& req);
SolveReport SolvePcg(const SolveRequest& req, const LinearOperator& precondition);

enum class OracleMode { kRandom, kAdversarial };

// Stand-in for a bounded-residual quantum linear solver:
// z = z_exact + t u / ||M u||. Random mode draws u from the seed and t in
// [0.5, 1] * target; adversarial mode takes u along the smallest singular
// direction with t = target. ||M z - rhs|| <= target always holds.
SolveReport InexactOracle(const SolveRequest& req, OracleMode mode);

// Stateless solver handle.
struct LinearSolver {
  SolveMethod method = SolveMethod::kExact;
  OracleMode oracle_mode = OracleMode::kRandom;
  std::uint64_t seed = 0;
  int max_iterations = 10000;
  // kRefine: relative precision of the inner oracle solve per loop.
  double inner_epsilon = 1e-1;
  // kPCG: preconditioner application, identity when empty.
  LinearOperator preconditioner;

  // Solves to req.target_residual (ignored by kExact).
  SolveReport Solve(const SolveRequest& req) const;
};

// Residual-correction loop z <- z + d with M d = rhs - M z solved by `inner`
// to relative residual eps_inner, until ||rhs - M z|| <= eps_outer. Throws
// SolveFailure(kStalled) when two consecutive loops each contract by less
// than (eps_inner + 0.5) / 1.5.
SolveReport RefineLinear(const LinearSolver& inner, const Matrix& matrix,
                         const Vector& rhs, double eps_outer, double eps_inner,
                         int max_loops = 200);

// ceil(log(eps_outer / ||rhs||) / log(eps_inner)) + 2.
int RefinementLoopBound(double rhs_norm, double eps_outer, double eps_inner);

}  // namespace ifipm
