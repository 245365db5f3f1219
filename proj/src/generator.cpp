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

#include "ifipm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ifipm {

std::string_view GeneratorModeName(GeneratorMode mode) {
  return mode == GeneratorMode::kCentralStart ? "central-start" : "known-optimal";
}

GeneratorMode ParseGeneratorMode(std::string_view name) {
  if (name == "central-start") return GeneratorMode::kCentralStart;
  if (name == "known-optimal") return GeneratorMode::kKnownOptimal;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown generator mode '" + std::string(name) + "'");
}

namespace {

constexpr int kMaxAttempts = 100;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double Gaussian() { return normal_(engine_); }
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  Matrix GaussianMatrix(Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) out(i, j) = Gaussian();
    }
    return out;
  }
  Vector GaussianVector(Index size) { return GaussianMatrix(size, 1).col(0); }
  Vector UniformVector(Index size, double lo, double hi) {
    Vector out(size);
    for (Index i = 0; i < size; ++i) out(i) = Uniform(lo, hi);
    return out;
  }
  IndexList Permutation(Index n) {
    IndexList perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), engine_);
    return perm;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Orthonormal columns from the QR factorization of a Gaussian matrix, with
// column signs fixed so the map from seed to matrix is unique.
Matrix RandomOrthonormal(Sampler& rng, Index rows, Index cols) {
  const Matrix g = rng.GaussianMatrix(rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Vector GeometricSpectrum(Index m, double kappa) {
  Vector sigma(m);
  for (Index i = 0; i < m; ++i) {
    const double t = m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    sigma(i) = std::pow(kappa, -t);
  }
  return sigma;
}

void ValidateSpec(const GeneratorSpec& spec) {
  std::ostringstream os;
  if (spec.m < 1 || spec.n < 1) os << "m and n must be positive";
  else if (spec.m > spec.n) os << "m = " << spec.m << " exceeds n = " << spec.n;
  else if (!(spec.kappa_target >= 1.0)) os << "kappa_target must be >= 1";
  else if (!(spec.mu0 > 0.0)) os << "mu0 must be positive";
  const std::string message = os.str();
  if (!message.empty()) throw Error(ErrorCode::kInvalidArgument, message);
}

GeneratedInstance GenerateCentralStart(const GeneratorSpec& spec, Sampler& rng) {
  const Index m = spec.m;
  const Index n = spec.n;
  const Matrix u = RandomOrthonormal(rng, m, m);
  const Matrix v = RandomOrthonormal(rng, n, m);
  const Matrix a = u * GeometricSpectrum(m, spec.kappa_target).asDiagonal() * v.transpose();

  Iterate start;
  start.x = rng.UniformVector(n, 0.5, 2.0);
  start.s = (spec.mu0 / start.x.array()).matrix();
  start.y = rng.GaussianVector(m);
  Vector b = a * start.x;
  Vector c = a.transpose() * start.y + start.s;
  return GeneratedInstance{LinearProgram(a, std::move(b), std::move(c)),
                           std::move(start), std::nullopt, std::nullopt};
}

// Orthonormal n x m matrix whose first column is parallel to q and whose
// columns are all orthogonal to p. Returns nullopt on numerical breakdown.
std::optional<Matrix> ConstrainedRowSpace(Sampler& rng, const Vector& p,
                                          const Vector& q, Index m) {
  const Index n = p.size();
  Matrix basis(n, m + 1);
  Index filled = 0;
  auto push = [&](Vector w) {
    // Two passes of Gram-Schmidt against everything accepted so far.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < filled; ++j) {
        w -= basis.col(j).dot(w) * basis.col(j);
      }
    }
    const double norm = w.norm();
    if (!(norm > 1e-8)) return false;
    basis.col(filled++) = w / norm;
    return true;
  };
  if (p.norm() > 0.0 && !push(p)) return std::nullopt;
  const Index skip = filled;  // p itself is not part of the row space
  if (q.norm() > 0.0) push(q);
  for (int tries = 0; filled < m + skip && tries < 4 * kMaxAttempts; ++tries) {
    push(rng.GaussianVector(n));
  }
  if (filled < m + skip) return std::nullopt;
  return Matrix(basis.middleCols(skip, m));
}

GeneratedInstance GenerateKnownOptimal(const GeneratorSpec& spec, Sampler& rng) {
  const Index m = spec.m;
  const Index n = spec.n;
  if (n - m < 1) {
    throw Error(ErrorCode::kInteriorSearchFailed,
                "null(A) is trivial for m = n; no interior point besides x*");
  }
  const Index basic_size = spec.degenerate ? m - 1 : m;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const IndexList perm = rng.Permutation(n);
    Partition partition;
    partition.basic.assign(perm.begin(), perm.begin() + basic_size);
    partition.nonbasic.assign(perm.begin() + basic_size, perm.end());
    std::sort(partition.basic.begin(), partition.basic.end());
    std::sort(partition.nonbasic.begin(), partition.nonbasic.end());

    // Exactly central interior point.
    Vector x0 = rng.UniformVector(n, 0.5, 2.0);
    Vector s0 = (spec.mu0 / x0.array()).matrix();

    // Shape of the optimal pair; the scale alpha makes (x0-x*) orthogonal
    // to (s0-s*).
    Vector x_shape = Vector::Zero(n);
    Vector s_shape = Vector::Zero(n);
    for (Index i : partition.basic) x_shape(i) = rng.Uniform(1.0, 2.0);
    for (Index i : partition.nonbasic) s_shape(i) = rng.Uniform(1.0, 2.0);
    const double alpha = static_cast<double>(n) * spec.mu0 /
                         (x0.dot(s_shape) + x_shape.dot(s0));
    const Vector x_opt = alpha * x_shape;
    const Vector s_opt = alpha * s_shape;

    const std::optional<Matrix> v =
        ConstrainedRowSpace(rng, x0 - x_opt, s0 - s_opt, m);
    if (!v) continue;

    const Matrix u = RandomOrthonormal(rng, m, m);
    const Vector sigma = GeometricSpectrum(m, spec.kappa_target);
    const Matrix a = u * sigma.asDiagonal() * v->transpose();
    if (!spec.degenerate &&
        NumericalRank(SelectColumns(a, partition.basic)) < m) {
      continue;
    }

    const Vector y_opt = rng.GaussianVector(m);
    Vector b = a * x_opt;
    Vector c = a.transpose() * y_opt + s_opt;

    // s0 - s* = A^T w with w = U Sigma^{-1} V^T (s0 - s*); the first column
    // of V is parallel to s0 - s* and pairs with sigma_1 = 1, so w is not
    // amplified by kappa.
    const Vector w = u * (v->transpose() * (s0 - s_opt)).cwiseQuotient(sigma);
    Iterate start{std::move(x0), y_opt - w, std::move(s0)};
    Iterate optimal{x_opt, y_opt, s_opt};
    return GeneratedInstance{LinearProgram(a, std::move(b), std::move(c)),
                             std::move(start), std::move(optimal),
                             std::move(partition)};
  }
  throw Error(ErrorCode::kInteriorSearchFailed,
              "could not construct an instance within the resample budget");
}

}  // namespace

GeneratedInstance Generate(const GeneratorSpec& spec) {
  ValidateSpec(spec);
  Sampler rng(spec.seed);
  return spec.mode == GeneratorMode::kCentralStart
             ? GenerateCentralStart(spec, rng)
             : GenerateKnownOptimal(spec, rng);
}

bool CertReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CertCheck& c) { return c.passed; });
}

const CertCheck* CertReport::find(std::string_view name) const {
  for (const CertCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::optional<double> BruteForceVertexOptimum(const LinearProgram& lp) {
  const Index m = lp.rows();
  std::optional<double> best;
  ForEachCombination(lp.cols(), m, [&](const IndexList& cols) {
    const Matrix a_b = SelectColumns(lp.A(), cols);
    const Vector sv = SingularValues(a_b);
    if (!(sv(m - 1) > 1e-10 * sv(0))) return true;
    const Vector x_b = a_b.fullPivLu().solve(lp.b());
    if (x_b.minCoeff() < -1e-9 * (1.0 + x_b.cwiseAbs().maxCoeff())) return true;
    double value = 0.0;
    for (Index k = 0; k < m; ++k) {
      value += lp.c()(cols[static_cast<std::size_t>(k)]) * std::max(0.0, x_b(k));
    }
    if (!best || value < *best) best = value;
    return true;
  });
  return best;
}

CertReport Certify(const GeneratedInstance& inst) {
  const LinearProgram& lp = inst.lp;
  const double b_scale = 1.0 + InfNorm(lp.b());
  const double c_scale = 1.0 + InfNorm(lp.c());
  CertReport report;
  auto add = [&](std::string name, bool passed, double value) {
    report.checks.push_back({std::move(name), passed, value});
  };

  const ResidualReport start = Residuals(lp, inst.start);
  add("start_primal_feasible", start.primal_inf <= 1e-10 * b_scale, start.primal_inf);
  add("start_dual_feasible", start.dual_inf <= 1e-10 * c_scale, start.dual_inf);
  add("start_positive", inst.start.strictly_positive(),
      std::min(inst.start.x.minCoeff(), inst.start.s.minCoeff()));
  add("start_in_neighborhood", InNeighborhood(inst.start, 0.7),
      CentralityDeviation(inst.start) / inst.start.mu());

  if (inst.optimal) {
    const Iterate& opt = *inst.optimal;
    const ResidualReport r = Residuals(lp, opt);
    const double n = static_cast<double>(lp.cols());
    add("optimal_primal_feasible", r.primal_inf <= 1e-10 * b_scale, r.primal_inf);
    add("optimal_dual_feasible", r.dual_inf <= 1e-10 * c_scale, r.dual_inf);
    add("optimal_nonnegative", opt.x.minCoeff() >= 0.0 && opt.s.minCoeff() >= 0.0,
        std::min(opt.x.minCoeff(), opt.s.minCoeff()));
    add("optimal_gap", r.gap <= 1e-12 * n, r.gap);
    if (lp.cols() <= 8) {
      const std::optional<double> vertex = BruteForceVertexOptimum(lp);
      const double claimed = lp.c().dot(opt.x);
      const double diff = vertex ? std::abs(*vertex - claimed)
                                 : std::numeric_limits<double>::infinity();
      add("vertex_optimum", diff <= 1e-8 * (1.0 + std::abs(claimed)), diff);
    }
  }
  if (inst.partition && inst.optimal) {
    double leak = 0.0;
    for (Index i : inst.partition->nonbasic) leak = std::max(leak, std::abs(inst.optimal->x(i)));
    for (Index i : inst.partition->basic) leak = std::max(leak, std::abs(inst.optimal->s(i)));
    add("partition_support", leak == 0.0, leak);
  }
  return report;
}

}  // namespace ifipm
