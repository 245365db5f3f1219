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

#include "ifipm/newton.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace ifipm {

std::string_view SystemKindName(SystemKind kind) {
  switch (kind) {
    case SystemKind::kFNS: return "FNS";
    case SystemKind::kAS: return "AS";
    case SystemKind::kNES: return "NES";
    case SystemKind::kMNES: return "MNES";
    case SystemKind::kOSS: return "OSS";
    case SystemKind::kPNES: return "PNES";
  }
  return "?";
}

SystemKind ParseSystemKind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  for (SystemKind kind : kAllSystemKinds) {
    if (SystemKindName(kind) == upper) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown system kind '" + std::string(name) + "'");
}

namespace {

// Diagonal quantities of one iterate.
struct Scaling {
  Vector d2;      // x / s
  Vector d;       // sqrt(x / s)
  double mu = 0;
};

Scaling ScalingOf(const Iterate& it) {
  if (!it.strictly_positive()) {
    throw Error(ErrorCode::kSingularDiagonal, "iterate is not strictly interior");
  }
  Scaling sc;
  sc.d2 = it.x.cwiseQuotient(it.s);
  sc.d = sc.d2.cwiseSqrt();
  sc.mu = it.mu();
  return sc;
}

// sigma = b - beta mu A S^{-1} e.
Vector NormalRhs(const LinearProgram& lp, const Iterate& it, double beta, double mu) {
  return lp.b() - beta * mu * (lp.A() * it.s.cwiseInverse());
}

Matrix Symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// MNES / PNES share everything but the basis and its inverse.
void AssembleScaledNormal(AssembledSystem& sys, const Iterate& it,
                          const LinearProgram& lp, const IndexList& basis,
                          const Matrix& basis_inverse, const Matrix& a_hat,
                          const Scaling& sc) {
  const Index m = lp.rows();
  Vector d_basis_inv(m);
  for (Index k = 0; k < m; ++k) {
    d_basis_inv(k) = 1.0 / sc.d(basis[static_cast<std::size_t>(k)]);
  }
  Matrix e = d_basis_inv.asDiagonal() * a_hat * sc.d.asDiagonal();
  sys.matrix = Symmetrized(e * e.transpose());
  Matrix p = d_basis_inv.asDiagonal() * basis_inverse;
  sys.rhs = p * NormalRhs(lp, it, sys.beta, sc.mu);
  sys.factor_e = std::move(e);
  sys.transform = std::move(p);
  sys.basis_used = basis;
  sys.symmetric = true;
  sys.positive_definite = true;
}

}  // namespace

AssembledSystem Assemble(SystemKind kind, const Iterate& it,
                         const PreprocessedProgram& prep, double beta) {
  const LinearProgram& lp = prep.base;
  const Matrix& a = lp.A();
  const Index m = lp.rows();
  const Index n = lp.cols();
  if (it.x.size() != n || it.s.size() != n || it.y.size() != m) {
    throw Error(ErrorCode::kInvalidArgument, "iterate dimensions do not match A");
  }
  const Scaling sc = ScalingOf(it);

  AssembledSystem sys;
  sys.kind = kind;
  sys.mu = sc.mu;
  sys.beta = beta;
  const Vector target = (beta * sc.mu - it.x.cwiseProduct(it.s).array()).matrix();

  switch (kind) {
    case SystemKind::kFNS: {
      // Unknowns (dy, dx, ds).
      sys.matrix = Matrix::Zero(m + 2 * n, m + 2 * n);
      sys.matrix.block(0, m, m, n) = a;
      sys.matrix.block(m, 0, n, m) = a.transpose();
      sys.matrix.block(m, m + n, n, n).setIdentity();
      sys.matrix.block(m + n, m, n, n).diagonal() = it.s;
      sys.matrix.block(m + n, m + n, n, n).diagonal() = it.x;
      sys.rhs = Vector::Zero(m + 2 * n);
      sys.rhs.tail(n) = target;
      break;
    }
    case SystemKind::kAS: {
      // Unknowns (dy, dx).
      sys.matrix = Matrix::Zero(m + n, m + n);
      sys.matrix.block(0, m, m, n) = a;
      sys.matrix.block(m, 0, n, m) = a.transpose();
      sys.matrix.block(m, m, n, n).diagonal() = -sc.d2.cwiseInverse();
      sys.rhs = Vector::Zero(m + n);
      sys.rhs.tail(n) = it.s - beta * sc.mu * it.x.cwiseInverse();
      sys.symmetric = true;
      break;
    }
    case SystemKind::kNES: {
      const Matrix ad = a * sc.d.asDiagonal();
      sys.matrix = Symmetrized(ad * ad.transpose());
      sys.rhs = NormalRhs(lp, it, beta, sc.mu);
      sys.symmetric = true;
      sys.positive_definite = true;
      break;
    }
    case SystemKind::kOSS: {
      // Unknowns (dy, lambda): [-X A^T  S V].
      const Matrix& v = prep.null_space;
      sys.matrix.resize(n, n);
      sys.matrix.leftCols(m) = -(it.x.asDiagonal() * a.transpose());
      sys.matrix.rightCols(n - m) = it.s.asDiagonal() * v;
      sys.rhs = target;
      sys.null_space = v;
      break;
    }
    case SystemKind::kMNES: {
      AssembleScaledNormal(sys, it, lp, prep.basis, prep.basis_inverse,
                           prep.a_hat, sc);
      break;
    }
    case SystemKind::kPNES: {
      const IndexList basis = SelectBasisMwb(it, a);
      Eigen::FullPivLU<Matrix> lu(SelectColumns(a, basis));
      AssembleScaledNormal(sys, it, lp, basis, lu.inverse(), lu.solve(a), sc);
      break;
    }
  }
  return sys;
}

StructureCheck CheckStructure(const AssembledSystem& sys) {
  StructureCheck check;
  const Matrix& mat = sys.matrix;
  const double scale = mat.cwiseAbs().maxCoeff();
  check.asymmetry = scale > 0.0 ? (mat - mat.transpose()).cwiseAbs().maxCoeff() / scale
                                : 0.0;
  check.symmetric = check.asymmetry <= 1e-12;
  const Matrix sym = Symmetrized(mat);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double norm = ev.cwiseAbs().maxCoeff();
  check.min_eigenvalue = norm > 0.0 ? ev(0) / norm : 0.0;
  check.positive_definite = check.symmetric && ev(0) > 0.0;
  return check;
}

IndexList SelectBasisMwb(const Iterate& it, const Matrix& a, double rank_tol) {
  if (!it.strictly_positive()) {
    throw Error(ErrorCode::kSingularDiagonal, "iterate is not strictly interior");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  const Vector ratio = it.x.cwiseQuotient(it.s);
  IndexList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return ratio(i) > ratio(j); });

  Matrix q(m, m);
  Index accepted = 0;
  IndexList basis;
  for (Index j : order) {
    if (accepted == m) break;
    const double norm = a.col(j).norm();
    if (norm == 0.0) continue;
    Vector w = a.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(accepted) * (q.leftCols(accepted).transpose() * w);
    }
    const double residual = w.norm();
    if (residual > rank_tol * norm) {
      q.col(accepted++) = w / residual;
      basis.push_back(j);
    }
  }
  if (accepted < m) {
    std::ostringstream os;
    os << "only " << accepted << " independent columns of " << m << " found";
    throw Error(ErrorCode::kBasisNotFound, os.str());
  }
  return basis;
}

namespace {

// Removes the rounding part of A dx, solved on the maximum-weight basis so the
// change lands on large x_i/s_i columns where it does not disturb centrality.
// In exact arithmetic the correction is zero.
Vector NullSpaceCleanup(const Iterate& it, const Matrix& a, const Vector& dx) {
  const IndexList basis = SelectBasisMwb(it, a);
  const Matrix a_b = SelectColumns(a, basis);
  const Eigen::PartialPivLU<Matrix> lu(a_b);
  const Vector rho = a * dx;
  Vector w = lu.solve(rho);
  w += lu.solve(rho - a_b * w);
  Vector out = Vector::Zero(dx.size());
  for (std::size_t k = 0; k < basis.size(); ++k) out(basis[k]) = w(static_cast<Index>(k));
  return out;
}

}  // namespace

Direction RecoverDirectionMnes(const AssembledSystem& sys, const Vector& z_tilde,
                               const Vector& r_hat, const Iterate& it,
                               const LinearProgram& lp) {
  if (!sys.transform || !sys.basis_used) {
    throw Error(ErrorCode::kInvalidArgument,
                "MNES recovery needs an MNES or PNES assembly");
  }
  const Vector recomputed = sys.matrix * z_tilde - sys.rhs;
  const double scale = 1.0 + InfNorm(sys.rhs) + InfNorm(sys.matrix * z_tilde);
  if (InfNorm(recomputed - r_hat) > 1e-8 * scale) {
    std::ostringstream os;
    os << "supplied residual differs from M z - sigma by "
       << InfNorm(recomputed - r_hat);
    throw Error(ErrorCode::kResidualMismatch, os.str());
  }
  const Scaling sc = ScalingOf(it);
  const Matrix& a = lp.A();
  const IndexList& basis = *sys.basis_used;

  Direction dir;
  dir.system = sys.kind;
  dir.residual_hat = r_hat;
  dir.dy = sys.transform->transpose() * z_tilde;
  dir.correction_v = Vector::Zero(lp.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    dir.correction_v(basis[k]) = sc.d(basis[k]) * r_hat(static_cast<Index>(k));
  }
  dir.ds = -(a.transpose() * dir.dy);
  dir.dx = (sys.beta * sc.mu * it.s.cwiseInverse()) - it.x -
           sc.d2.cwiseProduct(dir.ds) - dir.correction_v;
  dir.dx -= NullSpaceCleanup(it, a, dir.dx);
  return dir;
}

ProcedureADirection RecoverDirectionNesProcA(const Vector& dy_inexact,
                                             const Vector& r, const Iterate& it,
                                             const LinearProgram& lp, double beta,
                                             double eta) {
  const Scaling sc = ScalingOf(it);
  const Matrix& a = lp.A();
  ProcedureADirection out;
  Direction& dir = out.direction;
  dir.system = SystemKind::kNES;
  dir.residual_hat = r;
  dir.dy = dy_inexact;
  const Eigen::LLT<Matrix> gram(a * a.transpose());
  dir.correction_v = a.transpose() * gram.solve(r);
  dir.ds = -(a.transpose() * dir.dy);
  dir.dx = (beta * sc.mu * it.s.cwiseInverse()) - it.x -
           sc.d2.cwiseProduct(dir.ds) - dir.correction_v;
  dir.dx -= NullSpaceCleanup(it, a, dir.dx);
  out.admissible_residual =
      eta * sc.mu / (InfNorm(it.s) * SingularValues(a)(0));
  return out;
}

Direction RecoverDirectionOss(const Vector& dy, const Vector& lambda,
                              const Iterate& it, const LinearProgram& lp,
                              const Matrix& null_space) {
  (void)it;
  Direction dir;
  dir.system = SystemKind::kOSS;
  dir.dy = dy;
  dir.ds = -(lp.A().transpose() * dy);
  dir.dx = null_space * lambda;
  dir.correction_v = Vector::Zero(lp.cols());
  return dir;
}

Direction RecoverDirection(const AssembledSystem& sys, const Vector& solution,
                           const Iterate& it, const PreprocessedProgram& prep) {
  const LinearProgram& lp = prep.base;
  const Index m = lp.rows();
  const Index n = lp.cols();
  switch (sys.kind) {
    case SystemKind::kFNS: {
      Direction dir;
      dir.system = sys.kind;
      dir.dy = solution.head(m);
      dir.dx = solution.segment(m, n);
      dir.ds = solution.tail(n);
      dir.correction_v = Vector::Zero(n);
      return dir;
    }
    case SystemKind::kAS: {
      Direction dir;
      dir.system = sys.kind;
      dir.dy = solution.head(m);
      dir.dx = solution.tail(n);
      // From X ds + S dx = beta mu e - X s.
      dir.ds = (sys.beta * sys.mu * it.x.cwiseInverse()) - it.s -
               it.s.cwiseQuotient(it.x).cwiseProduct(dir.dx);
      dir.correction_v = Vector::Zero(n);
      return dir;
    }
    case SystemKind::kNES: {
      const Vector r = sys.matrix * solution - sys.rhs;
      return RecoverDirectionNesProcA(solution, r, it, lp, sys.beta, 0.0).direction;
    }
    case SystemKind::kOSS:
      return RecoverDirectionOss(solution.head(m), solution.tail(n - m), it, lp,
                                 *sys.null_space);
    case SystemKind::kMNES:
    case SystemKind::kPNES: {
      const Vector r_hat = sys.matrix * solution - sys.rhs;
      return RecoverDirectionMnes(sys, solution, r_hat, it, lp);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown system kind");
}

DirectionReport VerifyDirection(const Direction& dir, const Iterate& it,
                                const LinearProgram& lp, double beta, double eta) {
  const double mu = it.mu();
  const Matrix& a = lp.A();
  DirectionReport report;
  report.primal_residual = InfNorm(a * dir.dx);
  report.dual_residual = InfNorm(a.transpose() * dir.dy + dir.ds);
  const Vector sv = it.s.cwiseProduct(dir.correction_v);
  const Vector third = it.x.cwiseProduct(dir.ds) + it.s.cwiseProduct(dir.dx) -
                       (beta * mu - it.x.cwiseProduct(it.s).array()).matrix() + sv;
  report.complementarity_residual = InfNorm(third);
  report.dx_dot_ds = dir.dx.dot(dir.ds);
  report.sv_inf = InfNorm(sv);
  report.correction_within_bound = report.sv_inf <= eta * mu;
  return report;
}

double ConditionNumber(const AssembledSystem& sys) { return ConditionNumber(sys.matrix); }

double ChiBar(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (n > 12) {
    std::ostringstream os;
    os << "basis enumeration limited to n <= 12, got n = " << n;
    throw Error(ErrorCode::kTooLarge, os.str());
  }
  double best = 0.0;
  ForEachCombination(n, m, [&](const IndexList& cols) {
    const Matrix a_b = SelectColumns(a, cols);
    const Vector sv = SingularValues(a_b);
    if (!(sv(m - 1) > 1e-10 * sv(0))) return true;
    best = std::max(best, a_b.fullPivLu().solve(a).norm());
    return true;
  });
  return best;
}

}  // namespace ifipm
