/*
   Copyright 2026 centralab contributors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <centralab/types.hpp>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <vector>

namespace centralab {

// The global vectorization convention is column-stacking:
//   vec(A X B) = (B^T (x) A) vec(X).
// Everything that lifts maps on matrix space to n^2 x n^2 matrices relies
// on it, so it is fixed here once.

inline ComplexVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Index n) {
  if (v.size() != n * n) {
    throw DimensionError("unvectorize: vector length " + std::to_string(v.size()) +
                         " is not n^2 for n = " + std::to_string(n));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

/// Hilbert-Schmidt pairing <X, Y> = trace(Y* X); the Euclidean inner
/// product of the column-stacked vectors.
inline Complex hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "hs_inner");
  return x.cwiseProduct(y.conjugate()).sum();
}

inline double hs_norm(const ComplexMatrix& x) { return x.norm(); }

/// Orthonormal basis (as columns) of the numerical null space of m:
/// right-singular directions with sigma <= rank_rel_tol * sigma_max.
/// sigma_max = 0 is treated as a full kernel. Tall systems are reduced by
/// an unpivoted QR first so the SVD never sees more rows than columns.
inline ComplexMatrix null_space(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (!m.allFinite()) throw InputError("null_space: non-finite entries");
  const Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) return ComplexMatrix::Identity(cols, cols);

  ComplexMatrix reduced;
  if (m.rows() > cols) {
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    reduced = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  } else {
    reduced = m;
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(reduced, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max == 0.0) return ComplexMatrix::Identity(cols, cols);

  const double cutoff = tol.rank_rel_tol * sigma_max;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

/// A linear subspace of n x n matrix space, stored as an orthonormal set of
/// column-stacked basis vectors under the Hilbert-Schmidt inner product.
/// Dimension 0 (no basis columns) is a first-class value.
struct OperatorSubspace {
  Index ambient_dim = 0;  // n; the basis matrices are n x n
  ComplexMatrix vecs;     // n^2 x dim, orthonormal columns

  Index dim() const { return vecs.cols(); }

  ComplexMatrix basis_matrix(Index i) const { return unvectorize(vecs.col(i), ambient_dim); }

  std::vector<ComplexMatrix> basis() const {
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(dim()));
    for (Index i = 0; i < dim(); ++i) out.push_back(basis_matrix(i));
    return out;
  }

  static OperatorSubspace full(Index n) {
    return {n, ComplexMatrix::Identity(n * n, n * n)};
  }

  static OperatorSubspace zero(Index n) { return {n, ComplexMatrix(n * n, 0)}; }
};

inline void require_same_ambient(const OperatorSubspace& u, const OperatorSubspace& v, const char* what) {
  if (u.ambient_dim != v.ambient_dim) {
    throw DimensionError(std::string(what) + ": ambient dimension mismatch (" +
                         std::to_string(u.ambient_dim) + " vs " + std::to_string(v.ambient_dim) + ")");
  }
}

/// Subspace whose basis columns are the given null-space columns of a map
/// on matrix space, reshaped to matrices.
inline OperatorSubspace subspace_from_vecs(Index n, ComplexMatrix vecs) {
  return {n, std::move(vecs)};
}

/// HS-orthonormal basis of the span of the given matrices. Rank decisions
/// compare singular values of the stacked system against rank_rel_tol times
/// the largest one.
inline OperatorSubspace orthonormalize(Index n, const std::vector<ComplexMatrix>& mats,
                                       const ToleranceConfig& tol) {
  if (mats.empty()) return OperatorSubspace::zero(n);
  ComplexMatrix stacked(n * n, static_cast<Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (mats[j].rows() != n || mats[j].cols() != n) {
      throw DimensionError("orthonormalize: matrix " + std::to_string(j) + " is not " +
                           std::to_string(n) + "x" + std::to_string(n));
    }
    stacked.col(static_cast<Index>(j)) = vectorize(mats[j]);
  }
  if (!stacked.allFinite()) throw InputError("orthonormalize: non-finite entries");

  Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max == 0.0) return OperatorSubspace::zero(n);
  const double cutoff = tol.rank_rel_tol * sigma_max;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return {n, svd.matrixU().leftCols(rank)};
}

/// U cap V via the joint null space of the two orthogonal-complement
/// projectors I - B B*.
inline OperatorSubspace subspace_intersect(const OperatorSubspace& u, const OperatorSubspace& v,
                                           const ToleranceConfig& tol) {
  require_same_ambient(u, v, "subspace_intersect");
  const Index nn = u.ambient_dim * u.ambient_dim;
  ComplexMatrix stacked(2 * nn, nn);
  const ComplexMatrix eye = ComplexMatrix::Identity(nn, nn);
  stacked.topRows(nn) = eye - u.vecs * u.vecs.adjoint();
  stacked.bottomRows(nn) = eye - v.vecs * v.vecs.adjoint();
  return {u.ambient_dim, null_space(stacked, tol)};
}

struct ContainmentResult {
  bool contained = false;
  double residual = 0.0;  // max over basis elements of V of ||v - proj_U(v)||_HS
};

/// Does U contain V? The residual is the worst projection defect of V's
/// basis onto U; containment holds when it stays within containment_tol.
inline ContainmentResult subspace_contains(const OperatorSubspace& u, const OperatorSubspace& v,
                                           const ToleranceConfig& tol) {
  require_same_ambient(u, v, "subspace_contains");
  double residual = 0.0;
  for (Index j = 0; j < v.dim(); ++j) {
    const ComplexVector w = v.vecs.col(j);
    const ComplexVector defect = w - u.vecs * (u.vecs.adjoint() * w);
    residual = std::max(residual, defect.norm());
  }
  return {residual <= tol.containment_tol, residual};
}

}  // namespace centralab
