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

// Newton systems for the feasible primal-dual step
//
//   A dx = 0,   A^T dy + ds = 0,   X ds + S dx = beta mu e - X s,
//
// in six formulations, with the direction recovery each one needs.
//
//   kind  size    unknowns     symmetric  positive definite
//   FNS   2n+m    (dy,dx,ds)   no         no
//   AS    n+m     (dy,dx)      yes        no
//   NES   m       dy           yes        yes
//   OSS   n       (dy,lambda)  no         no
//   MNES  m       z            yes        yes
//   PNES  m       z            yes        yes
//
// MNES and PNES scale the normal equations by P = D_B^{-1} A_B^{-1}:
//
//   M-hat = P A D^2 A^T P^T = E E^T,   E = D_B^{-1} A_B^{-1} A D,
//   sigma-hat = P (b - beta mu A S^{-1} e).
//
// MNES uses the fixed preprocessing basis; PNES re-selects a maximum-weight
// basis (largest x_i/s_i) at every call.
//
// For an inexact z with M-hat z = sigma-hat + r-hat, setting
// v = (D_B r-hat, 0) restores A dx = 0 exactly, leaving the residual
// r' = -S v in the complementarity row only.

#pragma once

#include <optional>
#include <string_view>

#include "ifipm/problem.hpp"

namespace ifipm {

enum class SystemKind { kFNS, kAS, kNES, kMNES, kOSS, kPNES };

inline constexpr SystemKind kAllSystemKinds[] = {
    SystemKind::kFNS, SystemKind::kAS,   SystemKind::kNES,
    SystemKind::kOSS, SystemKind::kMNES, SystemKind::kPNES};

std::string_view SystemKindName(SystemKind kind);  // "FNS", ...
SystemKind ParseSystemKind(std::string_view name);  // case-insensitive

struct AssembledSystem {
  SystemKind kind = SystemKind::kNES;
  Matrix matrix;
  Vector rhs;
  bool symmetric = false;
  bool positive_definite = false;
  std::optional<Matrix> factor_e;     // MNES/PNES: E with matrix = E E^T
  std::optional<Matrix> transform;    // MNES/PNES: P = D_B^{-1} A_B^{-1}
  std::optional<IndexList> basis_used;
  std::optional<Matrix> null_space;   // OSS: V with A V = 0
  double mu = 0.0;
  double beta = 0.0;
};

// Builds the requested system at a strictly interior iterate. Throws
// kSingularDiagonal if some x_i or s_i is not positive.
AssembledSystem Assemble(SystemKind kind, const Iterate& it,
                         const PreprocessedProgram& prep, double beta);

struct StructureCheck {
  double asymmetry = 0.0;       // ||M - M^T||_max / ||M||_max
  double min_eigenvalue = 0.0;  // of the symmetric part, relative to ||M||_2
  bool symmetric = false;
  bool positive_definite = false;
};

// Numerical verification of the symmetric / positive-definite flags.
StructureCheck CheckStructure(const AssembledSystem& sys);

// Greedy maximum-weight basis: columns in descending x_i/s_i order (ties to
// the lower index), accepted when they raise the rank of the running set.
// Throws kBasisNotFound if fewer than m columns are accepted.
IndexList SelectBasisMwb(const Iterate& it, const Matrix& a,
                         double rank_tol = 1e-10);

struct Direction {
  Vector dx;
  Vector dy;
  Vector ds;
  Vector residual_hat;   // r-hat (zero length for systems without one)
  Vector correction_v;   // v with A v = r
  SystemKind system = SystemKind::kNES;
};

// Steps 2-5 of the MNES/PNES recovery:
//   dy = P^T z,  v = (D_B r-hat, 0),  ds = -A^T dy,
//   dx = beta mu S^{-1} e - x - D^2 ds - v.
// The iterate is assumed feasible, so c - A^T y - s and b - A x vanish and
// are left out of the step; evaluating them would only inject rounding of
// size eps ||c|| and eps ||x|| into a step of size O(mu). The rounding part
// of A dx is removed on the maximum-weight basis.
// r_hat must equal M-hat z - sigma-hat; it is recomputed and a disagreement
// beyond 1e-8 (relative) raises kResidualMismatch.
Direction RecoverDirectionMnes(const AssembledSystem& sys, const Vector& z_tilde,
                               const Vector& r_hat, const Iterate& it,
                               const LinearProgram& lp);

struct ProcedureADirection {
  Direction direction;
  // eta mu / (||s||_inf sigma_max(A)): the largest ||r|| for which
  // ||S v|| <= eta mu is guaranteed.
  double admissible_residual = 0.0;
};

// Plain NES with the projection correction v = A^T (A A^T)^{-1} r, where
// r = M dy - sigma is supplied by the caller. ds and the rounding cleanup
// follow the MNES recovery.
ProcedureADirection RecoverDirectionNesProcA(const Vector& dy_inexact,
                                             const Vector& r, const Iterate& it,
                                             const LinearProgram& lp, double beta,
                                             double eta);

// ds = -A^T dy, dx = V lambda. Feasible for any (dy, lambda).
Direction RecoverDirectionOss(const Vector& dy, const Vector& lambda,
                              const Iterate& it, const LinearProgram& lp,
                              const Matrix& null_space);

// Direction from a (possibly inexact) solution of sys. NES uses the
// projection correction; FNS and AS take the solution as is.
Direction RecoverDirection(const AssembledSystem& sys, const Vector& solution,
                           const Iterate& it, const PreprocessedProgram& prep);

struct DirectionReport {
  double primal_residual = 0.0;          // ||A dx||_inf
  double dual_residual = 0.0;            // ||A^T dy + ds||_inf
  double complementarity_residual = 0.0; // ||X ds + S dx - (beta mu e - Xs) + S v||_inf
  double dx_dot_ds = 0.0;
  double sv_inf = 0.0;                   // ||S v||_inf
  bool correction_within_bound = false;  // ||S v||_inf <= eta mu
};

DirectionReport VerifyDirection(const Direction& dir, const Iterate& it,
                                const LinearProgram& lp, double beta, double eta);

double ConditionNumber(const AssembledSystem& sys);

// chi-bar = max over bases B of ||A_B^{-1} A||_F, by enumeration.
// Throws kTooLarge for n > 12.
double ChiBar(const Matrix& a);

}  // namespace ifipm
