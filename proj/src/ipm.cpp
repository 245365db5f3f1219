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

#include "ifipm/ipm.hpp"

#include <cmath>
#include <sstream>

namespace ifipm {

ParameterCheck CheckParameters(Index n, double theta, double eta, double beta) {
  const double rn = std::sqrt(static_cast<double>(n));
  ParameterCheck check;
  check.con1_lhs = beta;
  check.con1_rhs = 1.0 - (eta + 0.01) / rn;
  check.con1 = check.con1_lhs <= check.con1_rhs;
  check.con2_lhs = (theta * theta + static_cast<double>(n) * (1.0 - beta) * (1.0 - beta) +
                    eta * eta) /
                       (std::pow(2.0, 1.5) * (1.0 - theta)) +
                   eta;
  check.con2_rhs = theta * (beta - eta / rn);
  check.con2 = check.con2_lhs <= check.con2_rhs;
  return check;
}

IpmParams IpmParams::AlgorithmDefaults() {
  IpmParams p;
  p.theta = 0.7;
  p.eta = 0.1;
  p.accept_unverified = true;
  return p;
}

IpmParams IpmParams::Validated() {
  IpmParams p;
  p.theta = 0.4;
  p.eta = 0.1;
  return p;
}

double IpmParams::BetaFor(Index n) const {
  return beta.value_or(1.0 - 0.2 / std::sqrt(static_cast<double>(n)));
}

double SolveTolerance(const IpmParams& params, SystemKind kind, double mu,
                      double s_inf, double sigma_min_a, double sigma_max_a) {
  switch (kind) {
    case SystemKind::kMNES:
    case SystemKind::kPNES:
      return params.eta / std::sqrt(1.0 + params.theta) * std::sqrt(mu);
    case SystemKind::kNES:
      return params.eta * mu * std::min(sigma_min_a, 1.0 / sigma_max_a) / s_inf;
    case SystemKind::kOSS:
    case SystemKind::kFNS:
    case SystemKind::kAS:
      return params.eta * mu;
  }
  return 0.0;
}

namespace {

double MaxKappa(const IpmTrace& trace) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const IpmRecord& rec : trace.records) {
    if (!std::isnan(rec.kappa_system) && !(rec.kappa_system <= best)) best = rec.kappa_system;
  }
  return best;
}

std::uint64_t IterationSeed(std::uint64_t base, int k) {
  // splitmix64 step keeps per-iteration streams decorrelated.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void ValidateParams(const IpmParams& params) {
  std::ostringstream os;
  if (!(params.theta >= 0.0 && params.theta < 1.0)) os << "theta must lie in [0,1)";
  else if (!(params.eta >= 0.0 && params.eta < 1.0)) os << "eta must lie in [0,1)";
  else if (params.beta && !(*params.beta > 0.0 && *params.beta < 1.0))
    os << "beta must lie in (0,1)";
  else if (!(params.zeta > 0.0)) os << "zeta must be positive";
  const std::string message = os.str();
  if (!message.empty()) throw Error(ErrorCode::kInvalidArgument, message);
}

// Preconditioner for CG on the plain normal equations: (L L^T)^{-1} with
// L = A_B D_B for the current maximum-weight basis.
LinearOperator MwbPreconditioner(const AssembledSystem& pnes) {
  const Matrix p = *pnes.transform;  // D_B^{-1} A_B^{-1}
  return [p](const Vector& r) -> Vector { return p.transpose() * (p * r); };
}

LinearOperator JacobiPreconditioner(const Matrix& m) {
  const Vector inv_diag = m.diagonal().cwiseInverse();
  return [inv_diag](const Vector& r) -> Vector { return inv_diag.cwiseProduct(r); };
}

}  // namespace

IpmResult IfIpm(const PreprocessedProgram& prep, const Iterate& start,
                const IpmParams& params, const IpmObserver& observer) {
  ValidateParams(params);
  const LinearProgram& lp = prep.base;
  const Index n = lp.cols();
  const double beta = params.BetaFor(n);

  IpmResult result;
  result.trace.beta = beta;
  result.trace.parameters = CheckParameters(n, params.theta, params.eta, beta);
  if (!result.trace.parameters.ok() && !params.accept_unverified) {
    std::ostringstream os;
    os << "parameters fail the convergence conditions (con1 " << result.trace.parameters.con1
       << ", con2 " << result.trace.parameters.con2 << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  if (!InNeighborhood(start, params.theta)) {
    throw Error(ErrorCode::kInvalidArgument, "starting point is not in N(theta)");
  }
  if (!IsFeasible(lp, start, 1e-8)) {
    throw Error(ErrorCode::kInvalidArgument, "starting point is not feasible");
  }

  const Vector sv_a = SingularValues(lp.A());
  const double sigma_max_a = sv_a(0);
  const double sigma_min_a = sv_a(sv_a.size() - 1);

  Iterate it = start;
  double mu = it.mu();
  for (int k = 0; mu > params.zeta; ++k) {
    if (k >= params.max_iterations) {
      std::ostringstream os;
      os << "mu = " << mu << " after " << k << " iterations";
      throw Error(ErrorCode::kMaxIterations, os.str());
    }
    const AssembledSystem sys = Assemble(params.system, it, prep, beta);
    if (observer) observer(k, it, sys);

    IpmRecord rec;
    rec.k = k;
    rec.mu = mu;
    if (params.track_condition) rec.kappa_system = ConditionNumber(sys);
    rec.target_residual =
        SolveTolerance(params, params.system, mu, InfNorm(it.s), sigma_min_a, sigma_max_a);

    LinearSolver solver = params.solver;
    if (solver.method == SolveMethod::kPCG && !solver.preconditioner) {
      solver.preconditioner = params.system == SystemKind::kNES
                                  ? MwbPreconditioner(Assemble(SystemKind::kPNES, it, prep, beta))
                                  : JacobiPreconditioner(sys.matrix);
    }
    SolveReport solve;
    try {
      solve = solver.Solve(SolveRequest{sys.matrix, sys.rhs, rec.target_residual,
                                        params.norm, params.max_iterations,
                                        IterationSeed(params.solver.seed, k)});
    } catch (const Error& e) {
      throw Error(ErrorCode::kSolverFailure,
                  "iteration " + std::to_string(k) + ": " + e.what());
    }
    rec.achieved_residual = solve.achieved_residual;
    rec.solver_iterations = solve.iterations;

    const Direction dir = RecoverDirection(sys, solve.solution, it, prep);
    rec.dx_dot_ds = dir.dx.dot(dir.ds);
    rec.dx_norm = dir.dx.norm();
    rec.ds_norm = dir.ds.norm();
    rec.sv_inf = InfNorm(it.s.cwiseProduct(dir.correction_v));

    it.x += dir.dx;
    it.y += dir.dy;
    it.s += dir.ds;
    const double next_mu = it.mu();
    rec.mu_ratio = next_mu / mu;
    rec.in_neighborhood = InNeighborhood(it, params.theta);
    const ResidualReport res = Residuals(lp, it);
    rec.primal_inf = res.primal_inf;
    rec.dual_inf = res.dual_inf;
    result.trace.records.push_back(rec);
    if (!rec.in_neighborhood) {
      std::ostringstream os;
      os << "iterate " << k + 1 << " left N(" << params.theta
         << "): deviation/mu = " << CentralityDeviation(it) / next_mu;
      throw Error(ErrorCode::kLeftNeighborhood, os.str());
    }
    mu = next_mu;
  }
  result.iterate = std::move(it);
  return result;
}

RefinementResult IrIfIpm(const PreprocessedProgram& prep, const Iterate& start,
                         double zeta, double zeta_hat, const IpmParams& params,
                         int max_loops) {
  if (!(zeta > 0.0 && zeta_hat > 0.0 && zeta_hat < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need zeta > 0 and 0 < zeta_hat < 1");
  }
  const LinearProgram& lp = prep.base;
  const double n = static_cast<double>(lp.cols());

  RefinementResult result;
  IpmParams inner = params;
  inner.zeta = zeta_hat;
  IpmResult first = IfIpm(prep, start, inner);
  Iterate it = std::move(first.iterate);
  result.total_iterations = static_cast<int>(first.trace.records.size());
  {
    RefinementLoop loop;
    loop.loop = 1;
    loop.scale = 1.0;
    loop.gap_before = start.x.dot(start.s);
    loop.gap_after = it.x.dot(it.s);
    loop.contraction = loop.gap_after / loop.gap_before;
    loop.ipm_iterations = result.total_iterations;
    loop.max_kappa = MaxKappa(first.trace);
    result.loops.push_back(loop);
  }

  while (it.x.dot(it.s) / n > zeta) {
    if (static_cast<int>(result.loops.size()) >= max_loops) {
      throw Error(ErrorCode::kNoProgress, "refinement loop budget exhausted");
    }
    const double gap = it.x.dot(it.s);
    const double scale = 1.0 / gap;

    // Residual problem in shifted, scaled variables x' = nabla (x + x-hat).
    LinearProgram refine_lp(lp.A(), scale * lp.b(), scale * it.s);
    PreprocessedProgram refine_prep{refine_lp, prep.basis, prep.basis_inverse,
                                    prep.a_hat, scale * prep.b_hat, prep.null_space};
    Iterate warm{scale * it.x, Vector::Zero(lp.rows()), scale * it.s};
    inner.zeta = zeta_hat * warm.mu();
    IpmResult sub = IfIpm(refine_prep, warm, inner);

    const Vector x_hat = sub.iterate.x - scale * it.x;
    it.x += x_hat / scale;
    it.y += sub.iterate.y / scale;
    it.s = lp.c() - lp.A().transpose() * it.y;

    RefinementLoop loop;
    loop.loop = static_cast<int>(result.loops.size()) + 1;
    loop.scale = scale;
    loop.gap_before = gap;
    loop.gap_after = it.x.dot(it.s);
    loop.contraction = loop.gap_after / gap;
    loop.ipm_iterations = static_cast<int>(sub.trace.records.size());
    loop.max_kappa = MaxKappa(sub.trace);
    result.total_iterations += loop.ipm_iterations;
    result.loops.push_back(loop);
    if (!(loop.contraction <= 2.0 * zeta_hat) || !it.strictly_positive()) {
      std::ostringstream os;
      os << "loop " << loop.loop << " contracted the gap by " << loop.contraction
         << " (limit " << 2.0 * zeta_hat << ")";
      throw Error(ErrorCode::kNoProgress, os.str());
    }
  }
  result.iterate = std::move(it);
  return result;
}

}  // namespace ifipm
