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

// Random standard-form instances with a prescribed condition number of A and
// an exactly central, strictly feasible starting point.
//
// A = U diag(sigma) V^T with U orthogonal (m x m), V orthonormal (n x m) and
// sigma geometric from 1 down to 1/kappa, so kappa(A) equals the target up to
// rounding.
//
// Central-start mode draws x0 > 0, sets s0 = mu0 / x0 and y0 ~ N(0, I), then
// b = A x0 and c = A^T y0 + s0.
//
// Known-optimal mode fixes an optimal partition (B, N) with |B| = m, or m - 1
// for a primal degenerate instance, and builds V so that a strictly
// complementary optimal pair (x*, s*) and an exactly central interior point
// (x0, s0) are simultaneously feasible: the row space of A must contain
// s0 - s* and be orthogonal to x0 - x*. That is possible exactly when
// (x0 - x*)^T (s0 - s*) = 0, which fixes the overall scale of (x*, s*).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifipm/problem.hpp"

namespace ifipm {

enum class GeneratorMode { kCentralStart, kKnownOptimal };

std::string_view GeneratorModeName(GeneratorMode mode);
GeneratorMode ParseGeneratorMode(std::string_view name);

struct GeneratorSpec {
  Index m = 2;
  Index n = 4;
  double kappa_target = 1.0;
  bool degenerate = false;
  GeneratorMode mode = GeneratorMode::kCentralStart;
  double mu0 = 1.0;
  std::uint64_t seed = 0;
};

// Optimal partition: basic = support of x*, nonbasic = support of s*.
struct Partition {
  IndexList basic;
  IndexList nonbasic;
};

struct GeneratedInstance {
  LinearProgram lp;
  Iterate start;
  std::optional<Iterate> optimal;
  std::optional<Partition> partition;
};

GeneratedInstance Generate(const GeneratorSpec& spec);

struct CertCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
};

struct CertReport {
  std::vector<CertCheck> checks;

  bool passed() const;
  const CertCheck* find(std::string_view name) const;
};

// Re-checks every GeneratedInstance invariant. For n <= 8 the claimed optimum
// is compared against brute-force vertex enumeration.
CertReport Certify(const GeneratedInstance& inst);

// Minimum of c^T x over all basic feasible solutions. Only for tiny n.
// Returns nullopt if no basis yields a feasible vertex.
std::optional<double> BruteForceVertexOptimum(const LinearProgram& lp);

}  // namespace ifipm
