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

#pragma once

#include <random>

#include "ifipm/generator.hpp"
#include "ifipm/problem.hpp"
#include "oracles.hpp"

namespace fixtures {

using ifipm::Index;
using ifipm::Iterate;
using ifipm::LinearProgram;
using ifipm::Matrix;
using ifipm::Vector;

struct FeasiblePoint {
  LinearProgram lp;
  Iterate it;
};

// Gaussian A with b and c chosen so that a random point of N(theta) is
// exactly feasible. frac in [0, 1) sets ||XSe - mu e|| = frac theta mu.
inline FeasiblePoint RandomFeasiblePoint(std::mt19937_64& rng, Index m, Index n, double mu,
                                         double theta, double frac) {
  std::normal_distribution<double> g;
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
  const oracle::RandomIterate p = oracle::RandomNeighborhoodPoint(rng, n, mu, theta, frac);
  Vector y(m);
  for (Index i = 0; i < m; ++i) y(i) = g(rng);
  LinearProgram lp(a, a * p.x, a.transpose() * y + p.s);
  return {lp, Iterate{p.x, y, p.s}};
}

inline ifipm::GeneratorSpec Spec(Index m, Index n, double kappa, std::uint64_t seed,
                                 bool known_optimal = false, bool degenerate = false) {
  ifipm::GeneratorSpec spec;
  spec.m = m;
  spec.n = n;
  spec.kappa_target = kappa;
  spec.seed = seed;
  spec.degenerate = degenerate;
  spec.mode = known_optimal || degenerate ? ifipm::GeneratorMode::kKnownOptimal
                                          : ifipm::GeneratorMode::kCentralStart;
  return spec;
}

inline double MaxAbs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace fixtures
