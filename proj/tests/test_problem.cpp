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

#include <random>

#include "doctest.h"
#include "ifipm/generator.hpp"
#include "ifipm/problem.hpp"
#include "oracles.hpp"

using namespace ifipm;

namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kInvalidArgument;
}

Matrix M(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

Vector V(std::initializer_list<double> values) {
  Vector out(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

}  // namespace

TEST_CASE("validate accepts the identity") {
  const ValidationReport r = Validate(Matrix::Identity(2, 2), V({1, 1}), V({1, 1}));
  CHECK(r.valid);
  CHECK(r.rank == 2);
  CHECK_FALSE(r.error.has_value());
}

TEST_CASE("validate rejects bad shapes and rank") {
  const ValidationReport dup = Validate(M({{1, 1}, {2, 2}}), V({1, 2}), V({1, 1}));
  CHECK_FALSE(dup.valid);
  CHECK(dup.error == ErrorCode::kRankDeficient);
  CHECK(CodeOf([] { LinearProgram(M({{1, 1}, {2, 2}}), V({1, 2}), V({1, 1})); }) ==
        ErrorCode::kRankDeficient);

  const ValidationReport tall = Validate(Matrix::Ones(3, 2), V({1, 1, 1}), V({1, 1}));
  CHECK(tall.error == ErrorCode::kDimensionOrder);
  CHECK(CodeOf([] { LinearProgram(Matrix::Ones(3, 2), V({1, 1, 1}), V({1, 1})); }) ==
        ErrorCode::kDimensionOrder);

  CHECK(CodeOf([] { LinearProgram(Matrix::Identity(2, 2), V({1, 1, 1}), V({1, 1})); }) ==
        ErrorCode::kInvalidArgument);
  Vector bad = V({1, 1});
  bad(1) = std::nan("");
  CHECK(CodeOf([&] { LinearProgram(Matrix::Identity(2, 2), bad, V({1, 1})); }) ==
        ErrorCode::kNonFinite);
}

TEST_CASE("residuals on the identity instance") {
  const Index n = 3;
  LinearProgram lp(Matrix::Identity(n, n), Vector::Ones(n), Vector::Ones(n));
  Iterate it{Vector::Ones(n), Vector::Zero(n), Vector::Ones(n)};
  const ResidualReport r = Residuals(lp, it);
  CHECK(r.primal_inf == 0.0);
  CHECK(r.dual_inf == 0.0);
  CHECK(r.gap == doctest::Approx(3.0));
  CHECK(r.mu == doctest::Approx(1.0));
  CHECK(r.gap == n * r.mu);
}

TEST_CASE("residuals are blind to null-space perturbations") {
  LinearProgram lp(M({{1, 1, 0}, {0, 1, 1}}), V({2, 2}), V({1, 1, 1}));
  Iterate it{V({1, 1, 1}), V({0, 0}), V({1, 1, 1})};
  const Matrix null = NullSpaceBasis(lp.A());
  it.x += 0.25 * null.col(0);
  CHECK(Residuals(lp, it).primal_inf <= 1e-15);
}

TEST_CASE("generator optimum has a tiny gap") {
  GeneratorSpec spec;
  spec.m = 4;
  spec.n = 9;
  spec.mode = GeneratorMode::kKnownOptimal;
  spec.seed = 5;
  const GeneratedInstance inst = Generate(spec);
  CHECK(Residuals(inst.lp, *inst.optimal).gap <= 1e-10 * 9);
}

TEST_CASE("neighborhood membership") {
  Iterate central{Vector::Ones(4), Vector::Zero(2), Vector::Ones(4)};
  CHECK(InNeighborhood(central, 0.0));
  CHECK(InNeighborhood(central, 0.5));

  // xs = (1.4, 1): mu = 1.2, deviation = 0.2 sqrt(2) = 0.283 > 0.24.
  Iterate off{V({1, 1}), Vector::Zero(1), V({1.4, 1})};
  CHECK(CentralityDeviation(off) == doctest::Approx(0.2 * std::sqrt(2.0)));
  CHECK_FALSE(InNeighborhood(off, 0.2));
  CHECK(InNeighborhood(off, 0.25));

  Iterate boundary{V({1, 0}), Vector::Zero(1), V({1, 1})};
  CHECK_FALSE(InNeighborhood(boundary, 0.99));
  Iterate negative{V({2, -1e-9}), Vector::Zero(1), V({1, 1})};
  CHECK_FALSE(InNeighborhood(negative, 0.99));
}

TEST_CASE("neighborhood implies componentwise bounds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = 0.7;
    const oracle::RandomIterate p = oracle::RandomNeighborhoodPoint(rng, 8, 0.3, theta, 0.99);
    Iterate it{p.x, Vector::Zero(2), p.s};
    REQUIRE(InNeighborhood(it, theta));
    const double mu = it.mu();
    const Vector xs = it.x.cwiseProduct(it.s);
    CHECK(xs.minCoeff() >= (1 - theta) * mu * (1 - 1e-12));
    CHECK(xs.maxCoeff() <= (1 + theta) * mu * (1 + 1e-12));
  }
}

TEST_CASE("binary length") {
  CHECK(BinaryLength(LinearProgram(M({{1}}), V({1}), V({1}))) == 6);
  CHECK(BinaryLength(M({{0}}), V({0}), V({0})) == 3);

  // Crossing a power of two adds exactly one bit.
  const Matrix base = M({{3, 1, 0}, {0, 2, 5}});
  const Vector b = V({4, 7});
  const Vector c = V({1, 0, 9});
  Matrix bumped = base;
  bumped(0, 0) = 4;  // ceil(log2(4)) = 2 -> ceil(log2(5)) = 3
  CHECK(BinaryLength(LinearProgram(bumped, b, c)) ==
        BinaryLength(LinearProgram(base, b, c)) + 1);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-300, 300);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(3, 5);
    Vector bb(3), cc(5);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 5; ++j) a(i, j) = entry(rng);
    for (Index i = 0; i < 3; ++i) bb(i) = entry(rng);
    for (Index j = 0; j < 5; ++j) cc(j) = entry(rng);
    CHECK(BinaryLength(LinearProgram(a, bb, cc)) == oracle::BinaryLength(a, bb, cc));
  }
}

TEST_CASE("preprocess with an identity basis is a no-op") {
  const Matrix a = M({{1, 0, 2, 3}, {0, 1, -1, 4}});
  LinearProgram lp(a, V({5, 6}), V({1, 1, 1, 1}));
  const PreprocessedProgram prep = Preprocess(lp, IndexList{0, 1});
  CHECK((prep.a_hat - a).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((prep.b_hat - lp.b()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("preprocess rejects bad bases") {
  const Matrix a = M({{1, 1, 2, 3}, {0, 0, -1, 4}});
  LinearProgram lp(a, V({5, 6}), V({1, 1, 1, 1}));
  CHECK(CodeOf([&] { Preprocess(lp, IndexList{0, 1}); }) == ErrorCode::kSingularBasis);
  CHECK_THROWS_AS(Preprocess(lp, IndexList{2, 2}), Error);
  CHECK(CodeOf([&] { Preprocess(lp, IndexList{2}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { Preprocess(lp, IndexList{0, 9}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("preprocess on random instances") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(3, 5);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 5; ++j) a(i, j) = g(rng);
    LinearProgram lp(a, Vector::Ones(3), Vector::Ones(5));
    const PreprocessedProgram prep = Preprocess(lp);
    REQUIRE(prep.basis.size() == 3);
    const Matrix on_basis = SelectColumns(prep.a_hat, prep.basis);
    CHECK((on_basis - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((prep.a_hat - prep.basis_inverse * a).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((prep.b_hat - prep.basis_inverse * lp.b()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((prep.null_space.transpose() * prep.null_space - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);

    // Idempotent: preprocessing A-hat with the same basis leaves it unchanged.
    LinearProgram again(prep.a_hat, prep.b_hat, lp.c());
    const PreprocessedProgram twice = Preprocess(again, prep.basis);
    CHECK((twice.a_hat - prep.a_hat).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("canonical reformulation") {
  const Matrix a = M({{1, 0, 2, 3}, {0, 1, -1, 4}});
  const Vector b = V({5, 6});
  LinearProgram lp(a, b, V({1, 2, 3, 4}));
  const LinearProgram big = CanonicalReformulate(lp);
  CHECK(big.rows() == 4);
  CHECK(big.cols() == 8);
  CHECK(big.empty_interior());

  // x feasible for lp <=> (x, 0, 0) feasible for the doubled form.
  const Vector x = V({5, 6, 0, 0});
  Vector lifted = Vector::Zero(8);
  lifted.head(4) = x;
  CHECK((big.A() * lifted - big.b()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(big.c().head(4) == lp.c());
  CHECK(big.c().tail(4).isZero());

  // Any feasible point has zero slack, hence is never interior.
  Iterate it{lifted, Vector::Zero(4), Vector::Ones(8)};
  CHECK_FALSE(InNeighborhood(it, 0.99));
}
