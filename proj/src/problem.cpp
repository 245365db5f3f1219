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

#include "ifipm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ifipm {

ValidationReport Validate(const Matrix& a, const Vector& b, const Vector& c) {
  ValidationReport report;
  report.rows = a.rows();
  report.cols = a.cols();
  auto fail = [&](ErrorCode code, std::string message) {
    report.valid = false;
    report.error = code;
    report.message = std::move(message);
    return report;
  };
  if (b.size() != a.rows() || c.size() != a.cols()) {
    std::ostringstream os;
    os << "A is " << a.rows() << "x" << a.cols() << ", b has " << b.size()
       << " entries, c has " << c.size();
    return fail(ErrorCode::kInvalidArgument, os.str());
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite()) {
    return fail(ErrorCode::kNonFinite, "NaN or Inf in instance data");
  }
  if (a.rows() > a.cols()) {
    std::ostringstream os;
    os << "m = " << a.rows() << " exceeds n = " << a.cols();
    return fail(ErrorCode::kDimensionOrder, os.str());
  }
  if (a.rows() == 0) {
    return fail(ErrorCode::kInvalidArgument, "empty constraint matrix");
  }
  const Vector sv = SingularValues(a);
  report.sigma_max = sv(0);
  report.sigma_min = sv(sv.size() - 1);
  report.rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(0) > 0.0 && sv(i) > 1e-10 * sv(0)) ++report.rank;
  }
  if (report.rank < a.rows()) {
    std::ostringstream os;
    os << "rank(A) = " << report.rank << " < m = " << a.rows();
    return fail(ErrorCode::kRankDeficient, os.str());
  }
  report.valid = true;
  return report;
}

LinearProgram::LinearProgram(Matrix a, Vector b, Vector c, bool empty_interior)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      empty_interior_(empty_interior),
      validation_(Validate(a_, b_, c_)) {
  if (!validation_.valid) {
    throw Error(*validation_.error, validation_.message);
  }
}

ResidualReport Residuals(const LinearProgram& lp, const Iterate& it) {
  ResidualReport r;
  r.primal_inf = InfNorm(lp.A() * it.x - lp.b());
  r.dual_inf = InfNorm(lp.A().transpose() * it.y + it.s - lp.c());
  r.gap = it.x.dot(it.s);
  r.mu = r.gap / static_cast<double>(lp.cols());
  return r;
}

bool IsFeasible(const LinearProgram& lp, const Iterate& it, double tol) {
  const ResidualReport r = Residuals(lp, it);
  return r.primal_inf <= tol * (1.0 + InfNorm(lp.b())) &&
         r.dual_inf <= tol * (1.0 + InfNorm(lp.c()));
}

double CentralityDeviation(const Iterate& it) {
  const double mu = it.mu();
  return (it.x.cwiseProduct(it.s).array() - mu).matrix().norm();
}

bool InNeighborhood(const Iterate& it, double theta) {
  if (it.x.size() == 0 || !it.strictly_positive()) return false;
  return CentralityDeviation(it) <= theta * it.mu();
}

namespace {

std::int64_t LogTerm(double value) {
  const double magnitude = std::round(std::abs(value));
  return static_cast<std::int64_t>(std::ceil(std::log2(magnitude + 1.0)));
}

}  // namespace

std::int64_t BinaryLength(const Matrix& a, const Vector& b, const Vector& c) {
  const std::int64_t m = a.rows();
  const std::int64_t n = a.cols();
  std::int64_t total = m * n + m + n;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) total += LogTerm(a(i, j));
  }
  for (Index i = 0; i < c.size(); ++i) total += LogTerm(c(i));
  for (Index i = 0; i < b.size(); ++i) total += LogTerm(b(i));
  return total;
}

std::int64_t BinaryLength(const LinearProgram& lp) {
  return BinaryLength(lp.A(), lp.b(), lp.c());
}

IndexList SelectPivotBasis(const Matrix& a, double pivot_tol) {
  Matrix work = a;
  const Index m = a.rows();
  const Index n = a.cols();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  IndexList basis;
  for (Index row = 0; row < m; ++row) {
    // Pivot on the largest remaining entry of the whole trailing block so
    // that the row order of A does not matter.
    Index best_row = -1;
    Index best_col = -1;
    double best = 0.0;
    for (Index i = row; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (std::abs(work(i, j)) > best) {
          best = std::abs(work(i, j));
          best_row = i;
          best_col = j;
        }
      }
    }
    if (best <= pivot_tol * scale) {
      throw Error(ErrorCode::kSingularBasis,
                  "column-pivoted elimination found fewer than m pivots");
    }
    work.row(row).swap(work.row(best_row));
    used[static_cast<std::size_t>(best_col)] = true;
    basis.push_back(best_col);
    for (Index i = row + 1; i < m; ++i) {
      const double factor = work(i, best_col) / work(row, best_col);
      if (factor != 0.0) work.row(i) -= factor * work.row(row);
    }
  }
  return basis;
}

PreprocessedProgram Preprocess(const LinearProgram& lp,
                               const std::optional<IndexList>& basis) {
  const Index m = lp.rows();
  const Index n = lp.cols();
  IndexList chosen;
  if (basis) {
    chosen = *basis;
    if (static_cast<Index>(chosen.size()) != m) {
      throw Error(ErrorCode::kInvalidArgument, "basis must have m indices");
    }
    IndexList sorted = chosen;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kSingularBasis, "basis contains a repeated index");
    }
    for (Index j : chosen) {
      if (j < 0 || j >= n) {
        throw Error(ErrorCode::kInvalidArgument, "basis index out of range");
      }
    }
  } else {
    chosen = SelectPivotBasis(lp.A());
  }

  const Matrix a_b = SelectColumns(lp.A(), chosen);
  const Vector sv = SingularValues(a_b);
  if (!(sv(m - 1) > 1e-10 * sv(0))) {
    throw Error(ErrorCode::kSingularBasis, "basis columns are linearly dependent");
  }
  Eigen::FullPivLU<Matrix> lu(a_b);
  PreprocessedProgram prep{lp, chosen, lu.inverse(), lu.solve(lp.A()),
                           lu.solve(lp.b()), NullSpaceBasis(lp.A())};
  // Snap the basis block to the identity it is in exact arithmetic.
  for (Index k = 0; k < m; ++k) {
    prep.a_hat.col(chosen[static_cast<std::size_t>(k)]) = Vector::Unit(m, k);
  }
  return prep;
}

LinearProgram CanonicalReformulate(const LinearProgram& lp) {
  const Index m = lp.rows();
  const Index n = lp.cols();
  Matrix a = Matrix::Zero(2 * m, n + 2 * m);
  a.topLeftCorner(m, n) = lp.A();
  a.bottomLeftCorner(m, n) = -lp.A();
  a.block(0, n, m, m).setIdentity();
  a.block(m, n + m, m, m).setIdentity();
  Vector b(2 * m);
  b << lp.b(), -lp.b();
  Vector c = Vector::Zero(n + 2 * m);
  c.head(n) = lp.c();
  return LinearProgram(std::move(a), std::move(b), std::move(c),
                       /*empty_interior=*/true);
}

}  // namespace ifipm
