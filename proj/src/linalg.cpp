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

#include "ifipm/linalg.hpp"

#include <cmath>
#include <sstream>

#include "ifipm/error.hpp"

namespace ifipm {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDimensionOrder: return "DimensionOrder";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSingularBasis: return "SingularBasis";
    case ErrorCode::kInteriorSearchFailed: return "InteriorSearchFailed";
    case ErrorCode::kSingularDiagonal: return "SingularDiagonal";
    case ErrorCode::kBasisNotFound: return "BasisNotFound";
    case ErrorCode::kResidualMismatch: return "ResidualMismatch";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kNotSPD: return "NotSPD";
    case ErrorCode::kStalled: return "Stalled";
    case ErrorCode::kLeftNeighborhood: return "LeftNeighborhood";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kNoProgress: return "NoProgress";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Vector SingularValues(const Matrix& matrix) {
  if (matrix.size() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(matrix);
  return svd.singularValues();
}

Index NumericalRank(const Matrix& matrix, double rel_tol) {
  const Vector sv = SingularValues(matrix);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

double ConditionNumber(const Matrix& matrix) {
  if (!AllFinite(matrix)) {
    throw Error(ErrorCode::kNonFinite, "condition number of non-finite matrix");
  }
  const Vector sv = SingularValues(matrix);
  if (sv.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty matrix");
  }
  const double smin = sv(sv.size() - 1);
  if (!(smin >= 1e-300)) {
    std::ostringstream os;
    os << "sigma_min = " << smin;
    throw Error(ErrorCode::kSingularMatrix, os.str());
  }
  return sv(0) / smin;
}

Matrix NullSpaceBasis(const Matrix& a) {
  const Index n = a.cols();
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (top > 0.0 && sv(i) > 1e-10 * top) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

Matrix SelectColumns(const Matrix& matrix, const IndexList& columns) {
  Matrix out(matrix.rows(), static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.col(static_cast<Index>(j)) = matrix.col(columns[j]);
  }
  return out;
}

void ForEachCombination(Index n, Index k,
                        const std::function<bool(const IndexList&)>& fn) {
  if (k < 0 || k > n) return;
  IndexList combo(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(combo)) return;
    Index i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++combo[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

bool AllFinite(const Matrix& matrix) { return matrix.allFinite(); }

double InfNorm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

}  // namespace ifipm
