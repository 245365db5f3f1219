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

#include "ifipm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace ifipm {

std::string_view SolveMethodName(SolveMethod method) {
  switch (method) {
    case SolveMethod::kExact: return "exact";
    case SolveMethod::kCG: return "cg";
    case SolveMethod::kPCG: return "pcg";
    case SolveMethod::kOracle: return "oracle";
    case SolveMethod::kRefine: return "refine";
  }
  return "?";
}

SolveMethod ParseSolveMethod(std::string_view name) {
  for (SolveMethod m : {SolveMethod::kExact, SolveMethod::kCG, SolveMethod::kPCG,
                        SolveMethod::kOracle, SolveMethod::kRefine}) {
    if (SolveMethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown solver '" + std::string(name) + "'");
}

double ResidualNormOf(const Matrix& matrix, const Vector& solution,
                      const Vector& rhs, ResidualNorm norm) {
  const Vector r = matrix * solution - rhs;
  return norm == ResidualNorm::kTwo ? r.norm() : InfNorm(r);
}

namespace {

double NormOf(const Vector& v, ResidualNorm norm) {
  return norm == ResidualNorm::kTwo ? v.norm() : InfNorm(v);
}

bool LooksSymmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

void CheckSquare(const Matrix& m, const Vector& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix/rhs dimension mismatch");
  }
}

}  // namespace

SolveReport SolveExact(const Matrix& matrix, const Vector& rhs) {
  CheckSquare(matrix, rhs);
  SolveReport report;
  report.method = SolveMethod::kExact;
  if (matrix.size() == 0) {
    report.solution = Vector();
    return report;
  }
  auto solve_with = [&](const auto& factor) {
    Vector z = factor.solve(rhs);
    z += factor.solve(rhs - matrix * z);
    return z;
  };
  bool done = false;
  if (LooksSymmetric(matrix)) {
    const Eigen::LLT<Matrix> llt(matrix);
    if (llt.info() == Eigen::Success) {
      report.solution = solve_with(llt);
      done = report.solution.allFinite();
    }
  }
  if (!done) {
    const Eigen::PartialPivLU<Matrix> lu(matrix);
    const Matrix& packed = lu.matrixLU();
    const double scale = matrix.cwiseAbs().maxCoeff();
    if (!(packed.diagonal().cwiseAbs().minCoeff() > 1e-300 * std::max(1.0, scale))) {
      throw Error(ErrorCode::kSingularMatrix, "zero pivot in LU factorization");
    }
    report.solution = solve_with(lu);
    if (!report.solution.allFinite()) {
      throw Error(ErrorCode::kSingularMatrix, "LU solve produced non-finite values");
    }
  }
  report.iterations = 1;
  report.achieved_residual = ResidualNormOf(matrix, report.solution, rhs);
  return report;
}

namespace {

SolveReport RunCg(const SolveRequest& req, const LinearOperator* precondition) {
  CheckSquare(req.matrix, req.rhs);
  const Matrix& mat = req.matrix;
  SolveReport report;
  report.method = precondition ? SolveMethod::kPCG : SolveMethod::kCG;
  Vector x = Vector::Zero(req.rhs.size());
  Vector r = req.rhs;
  auto apply_precondition = [&](const Vector& v) {
    return precondition ? (*precondition)(v) : v;
  };
  Vector z = apply_precondition(r);
  Vector p = z;
  double rz = r.dot(z);
  double res = NormOf(r, req.norm);
  report.residual_history.push_back(res);
  int k = 0;
  while (true) {
    if (res <= req.target_residual) {
      // The recurrence residual drifts from the true one; confirm before
      // stopping and restart from the true residual if they disagree.
      const Vector true_r = req.rhs - mat * x;
      const double true_res = NormOf(true_r, req.norm);
      if (true_res <= req.target_residual) break;
      r = true_r;
      z = apply_precondition(r);
      p = z;
      rz = r.dot(z);
      res = true_res;
    }
    if (k >= req.max_iterations) {
      report.solution = x;
      report.iterations = k;
      report.achieved_residual = ResidualNormOf(mat, x, req.rhs, req.norm);
      std::ostringstream os;
      os << "residual " << report.achieved_residual << " above target "
         << req.target_residual << " after " << k << " iterations";
      throw SolveFailure(ErrorCode::kNotConverged, os.str(), std::move(report));
    }
    const Vector ap = mat * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0)) {
      report.solution = x;
      report.iterations = k;
      report.achieved_residual = ResidualNormOf(mat, x, req.rhs, req.norm);
      throw SolveFailure(ErrorCode::kNotSPD, "non-positive curvature p^T M p",
                         std::move(report));
    }
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * ap;
    z = apply_precondition(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    res = NormOf(r, req.norm);
    report.residual_history.push_back(res);
    ++k;
  }
  report.solution = std::move(x);
  report.iterations = k;
  report.achieved_residual = ResidualNormOf(mat, report.solution, req.rhs, req.norm);
  return report;
}

}  // namespace

SolveReport SolveCg(const SolveRequest& req) { return RunCg(req, nullptr); }

SolveReport SolvePcg(const SolveRequest& req, const LinearOperator& precondition) {
  return RunCg(req, &precondition);
}

SolveReport InexactOracle(const SolveRequest& req, OracleMode mode) {
  CheckSquare(req.matrix, req.rhs);
  const Matrix& mat = req.matrix;
  SolveReport exact = SolveExact(mat, req.rhs);
  exact.method = SolveMethod::kOracle;
  exact.achieved_residual = ResidualNormOf(mat, exact.solution, req.rhs, req.norm);
  if (req.target_residual < 1e-15 || mat.size() == 0) return exact;

  Vector u;
  double t = req.target_residual;
  if (mode == OracleMode::kRandom) {
    std::mt19937_64 engine(req.seed.value_or(0));
    std::normal_distribution<double> normal;
    u.resize(req.rhs.size());
    for (Index i = 0; i < u.size(); ++i) u(i) = normal(engine);
    t *= std::uniform_real_distribution<double>(0.5, 1.0)(engine);
  } else {
    // Smallest singular direction: the largest solution error per unit of
    // residual.
    Eigen::JacobiSVD<Matrix> svd(mat, Eigen::ComputeThinV);
    u = svd.matrixV().col(svd.matrixV().cols() - 1);
    Index lead = 0;
    u.cwiseAbs().maxCoeff(&lead);
    if (u(lead) < 0.0) u = -u;
  }
  const Vector mu_dir = mat * u;
  const double mu_norm = NormOf(mu_dir, req.norm);
  if (!(mu_norm > 0.0)) return exact;
  u /= mu_norm;

  SolveReport report;
  report.method = SolveMethod::kOracle;
  report.iterations = 1;
  for (int attempt = 0; attempt < 14; ++attempt) {
    report.solution = exact.solution + t * u;
    report.achieved_residual = ResidualNormOf(mat, report.solution, req.rhs, req.norm);
    if (report.achieved_residual <= req.target_residual) return report;
    t *= std::min(1.0, req.target_residual / report.achieved_residual) *
         (1.0 - 1e-12 * std::pow(10.0, attempt));
  }
  return exact;
}

int RefinementLoopBound(double rhs_norm, double eps_outer, double eps_inner) {
  if (rhs_norm <= eps_outer) return 2;
  return static_cast<int>(std::ceil(std::log(eps_outer / rhs_norm) / std::log(eps_inner))) + 2;
}

SolveReport RefineLinear(const LinearSolver& inner, const Matrix& matrix,
                         const Vector& rhs, double eps_outer, double eps_inner,
                         int max_loops) {
  CheckSquare(matrix, rhs);
  if (!(eps_inner > 0.0 && eps_inner < 1.0) || !(eps_outer > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "refinement needs eps_inner in (0,1) and eps_outer > 0");
  }
  LinearSolver low = inner;
  if (low.method == SolveMethod::kRefine) low.method = SolveMethod::kOracle;
  const double stall_factor = (eps_inner + 0.5) / 1.5;

  SolveReport report;
  report.method = SolveMethod::kRefine;
  Vector z = Vector::Zero(rhs.size());
  Vector r = rhs;
  double res = r.norm();
  report.residual_history.push_back(res);
  int slow_loops = 0;
  int loop = 0;
  while (res > eps_outer) {
    if (loop >= max_loops) {
      report.solution = z;
      report.iterations = loop;
      report.achieved_residual = ResidualNormOf(matrix, z, rhs);
      throw SolveFailure(ErrorCode::kNotConverged, "refinement loop budget exhausted",
                         std::move(report));
    }
    SolveRequest req{matrix, r, eps_inner * res, ResidualNorm::kTwo,
                     low.max_iterations, low.seed + static_cast<std::uint64_t>(loop)};
    z += low.Solve(req).solution;
    r = rhs - matrix * z;
    const double next = r.norm();
    report.residual_history.push_back(next);
    ++loop;
    slow_loops = next > stall_factor * res ? slow_loops + 1 : 0;
    res = next;
    if (slow_loops >= 2) {
      report.solution = z;
      report.iterations = loop;
      report.achieved_residual = res;
      std::ostringstream os;
      os << "residual contracted by less than " << stall_factor
         << " in two consecutive loops";
      throw SolveFailure(ErrorCode::kStalled, os.str(), std::move(report));
    }
  }
  report.solution = std::move(z);
  report.iterations = loop;
  report.achieved_residual = ResidualNormOf(matrix, report.solution, rhs);
  return report;
}

SolveReport LinearSolver::Solve(const SolveRequest& req) const {
  switch (method) {
    case SolveMethod::kExact:
      return SolveExact(req.matrix, req.rhs);
    case SolveMethod::kCG:
    case SolveMethod::kPCG: {
      SolveRequest capped{req.matrix, req.rhs, req.target_residual, req.norm,
                          std::min(req.max_iterations, max_iterations), req.seed};
      if (method == SolveMethod::kPCG && preconditioner) {
        return SolvePcg(capped, preconditioner);
      }
      SolveReport report = SolveCg(capped);
      report.method = method;
      return report;
    }
    case SolveMethod::kOracle: {
      SolveRequest seeded{req.matrix, req.rhs, req.target_residual, req.norm,
                          req.max_iterations, req.seed.value_or(seed)};
      return InexactOracle(seeded, oracle_mode);
    }
    case SolveMethod::kRefine: {
      LinearSolver low = *this;
      low.method = SolveMethod::kOracle;
      low.seed = req.seed.value_or(seed);
      return RefineLinear(low, req.matrix, req.rhs, req.target_residual, inner_epsilon);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown solve method");
}

}  // namespace ifipm
