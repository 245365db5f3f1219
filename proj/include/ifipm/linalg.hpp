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

// Dense linear-algebra helpers shared by every module. Everything here is
// sized for desk-scale problems: singular values come from a full SVD.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ifipm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

// Singular values in descending order.
Vector SingularValues(const Matrix& matrix);

// Number of singular values above rel_tol * sigma_max.
Index NumericalRank(const Matrix& matrix, double rel_tol = 1e-10);

// sigma_max / sigma_min. Throws kSingularMatrix when sigma_min < 1e-300.
double ConditionNumber(const Matrix& matrix);

// Orthonormal basis of null(A), n x (n - rank(A)).
Matrix NullSpaceBasis(const Matrix& a);

Matrix SelectColumns(const Matrix& matrix, const IndexList& columns);

bool AllFinite(const Matrix& matrix);

// Calls fn with every k-element subset of {0, ..., n-1} in lexicographic
// order. fn returns false to stop early.
void ForEachCombination(Index n, Index k,
                        const std::function<bool(const IndexList&)>& fn);

// Max-norm helpers that tolerate empty vectors.
double InfNorm(const Vector& v);

}  // namespace ifipm
