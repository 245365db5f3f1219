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

// Standard-form linear programs
//
//   min c^T x  s.t.  A x = b, x >= 0      max b^T y  s.t.  A^T y + s = c, s >= 0
//
// together with primal-dual iterates, feasibility measures, the 2-norm
// central-path neighborhood and the one-time basis preprocessing used by the
// modified normal equations.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ifipm/error.hpp"
#include "ifipm/linalg.hpp"

namespace ifipm {

struct ValidationReport {
  Index rows = 0;
  Index cols = 0;
  Index rank = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  bool valid = false;
  std::optional<ErrorCode> error;
  std::string message;
};

// Checks dimensions, finiteness and rank(A) = m <= n. Never throws.
ValidationReport Validate(const Matrix& a, const Vector& b, const Vector& c);

// Immutable standard-form instance. The constructor runs Validate() and throws
// the reported error on failure.
class LinearProgram {
 public:
  LinearProgram(Matrix a, Vector b, Vector c, bool empty_interior = false);

  const Matrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }
  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }

  // Set for instances known to have no strictly feasible point (e.g. the
  // doubled canonical reformulation).
  bool empty_interior() const { return empty_interior_; }

  const ValidationReport& validation() const { return validation_; }

 private:
  Matrix a_;
  Vector b_;
  Vector c_;
  bool empty_interior_;
  ValidationReport validation_;
};

// Primal-dual point (x, y, s). D = S^{-1/2} X^{1/2} and friends are computed
// by the consumers that need them.
struct Iterate {
  Vector x;
  Vector y;
  Vector s;

  double mu() const { return x.size() == 0 ? 0.0 : x.dot(s) / x.size(); }
  bool strictly_positive() const {
    return (x.array() > 0.0).all() && (s.array() > 0.0).all();
  }
};

struct ResidualReport {
  double primal_inf = 0.0;  // ||Ax - b||_inf
  double dual_inf = 0.0;    // ||A^T y + s - c||_inf
  double gap = 0.0;         // x^T s
  double mu = 0.0;
};

ResidualReport Residuals(const LinearProgram& lp, const Iterate& it);

// Relative feasibility used by the IPM invariants:
// ||Ax-b||_inf <= tol (1 + ||b||_inf) and ||A^T y + s - c||_inf <= tol (1 + ||c||_inf).
bool IsFeasible(const LinearProgram& lp, const Iterate& it, double tol);

// Deviation ||XSe - mu e||_2.
double CentralityDeviation(const Iterate& it);

// N(theta): x > 0, s > 0 and ||XSe - mu e||_2 <= theta mu.
bool InNeighborhood(const Iterate& it, double theta);

// L = mn + m + n + sum ceil(log2(|a_ij|+1)) + sum ceil(log2(|c_i|+1))
//     + sum ceil(log2(|b_j|+1)).
// Non-integer magnitudes are rounded to the nearest integer first.
std::int64_t BinaryLength(const LinearProgram& lp);
// Same count on raw data, which need not have full row rank.
std::int64_t BinaryLength(const Matrix& a, const Vector& b, const Vector& c);

struct PreprocessedProgram {
  LinearProgram base;
  IndexList basis;        // B-hat, m distinct columns
  Matrix basis_inverse;   // A_B^{-1}
  Matrix a_hat;           // A_B^{-1} A
  Vector b_hat;           // A_B^{-1} b
  Matrix null_space;      // orthonormal basis of null(A), used by OSS
};

// One-time basis preprocessing. Without an explicit basis one is chosen by
// Gaussian elimination with column pivoting (pivot threshold 1e-10 relative).
// Throws kSingularBasis if the supplied columns are dependent.
PreprocessedProgram Preprocess(const LinearProgram& lp,
                               const std::optional<IndexList>& basis = {});

// Column-pivoted elimination basis selection on its own.
IndexList SelectPivotBasis(const Matrix& a, double pivot_tol = 1e-10);

// The (2m) x (n+2m) instance  [A I 0; -A 0 I] (x,u,u') = (b,-b), cost (c,0,0).
// Its interior is empty; the returned program carries that flag.
LinearProgram CanonicalReformulate(const LinearProgram& lp);

}  // namespace ifipm
