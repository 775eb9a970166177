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

#include <centralab/matrix_space.hpp>
#include <centralab/rng.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace centralab {

/// A linear map on n x n matrix space in its vectorized form: an
/// n^2 x n^2 matrix acting on vec(X).
struct LiftedOperator {
  Index ambient_dim = 0;
  ComplexMatrix mat;  // n^2 x n^2

  ComplexMatrix apply(const ComplexMatrix& x) const {
    return unvectorize(mat * vectorize(x), ambient_dim);
  }
};

namespace detail {

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// ad_A(X) = AX - XA.
inline ComplexMatrix ad_apply(const ComplexMatrix& a, const ComplexMatrix& x) {
  require_same_shape(a, x, "ad_apply");
  return a * x - x * a;
}

/// s-fold iterate of ad_A.
inline ComplexMatrix ad_power_apply(const ComplexMatrix& a, const ComplexMatrix& x, int s) {
  if (s < 1) throw InputError("ad_power_apply: s must be >= 1");
  ComplexMatrix y = ad_apply(a, x);
  for (int i = 1; i < s; ++i) y = ad_apply(a, y);
  return y;
}

enum class MultiplierSide { left, right };

/// Left multiplier X -> AX lifts to I (x) A; right multiplier X -> XA
/// lifts to A^T (x) I.
inline LiftedOperator multiplier_lift(const ComplexMatrix& a, MultiplierSide side) {
  require_square_finite(a, "multiplier_lift");
  const Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  if (side == MultiplierSide::left) return {n, detail::kron(eye, a)};
  return {n, detail::kron(a.transpose(), eye)};
}

/// Lift of ad_A. Built as the exact difference of the two multiplier lifts
/// so the identity ad = L - R holds entrywise.
inline LiftedOperator ad_lift(const ComplexMatrix& a) {
  LiftedOperator left = multiplier_lift(a, MultiplierSide::left);
  const LiftedOperator right = multiplier_lift(a, MultiplierSide::right);
  left.mat -= right.mat;
  return left;
}

inline LiftedOperator lifted_power(const LiftedOperator& op, int s) {
  if (s < 1) throw InputError("lifted_power: s must be >= 1");
  LiftedOperator out = op;
  for (int i = 1; i < s; ++i) out.mat = op.mat * out.mat;
  return out;
}

/// C_s(A) = { X : ad_A^s(X) = 0 }, the kernel of the lifted ad power.
inline OperatorSubspace centralizer(const ComplexMatrix& a, int s, const ToleranceConfig& tol) {
  if (s < 1) throw InputError("centralizer: s must be >= 1");
  require_square_finite(a, "centralizer");
  const LiftedOperator lifted = lifted_power(ad_lift(a), s);
  return subspace_from_vecs(a.rows(), null_space(lifted.mat, tol));
}

/// Default cap on the number of symmetrized constraint operators one
/// polarization call may enumerate.
inline constexpr std::uint64_t kPolarizationBudget = 200000;

namespace detail {

inline std::uint64_t multiset_count(std::uint64_t d, std::uint64_t k, std::uint64_t cap) {
  // C(d + k - 1, k), saturating just above cap.
  if (d == 0) return 0;
  std::uint64_t num = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    num = num * (d + i - 1) / i;  // exact: product of i consecutive integers is divisible by i!
    if (num > cap) return cap + 1;
  }
  return num;
}

/// Position of a non-decreasing index tuple in the lexicographic
/// enumeration of all multisets of its size over {0..d-1}.
inline std::size_t multiset_rank(const std::vector<Index>& tuple, Index d) {
  std::size_t rank = 0;
  Index prev = 0;
  const int size = static_cast<int>(tuple.size());
  for (int p = 0; p < size; ++p) {
    const std::uint64_t remaining = static_cast<std::uint64_t>(size - p - 1);
    for (Index u = prev; u < tuple[static_cast<std::size_t>(p)]; ++u) {
      rank += multiset_count(static_cast<std::uint64_t>(d - u), remaining,
                             std::numeric_limits<std::uint64_t>::max() / 2);
    }
    prev = tuple[static_cast<std::size_t>(p)];
  }
  return rank;
}

inline bool advance_multiset(std::vector<Index>& tuple, Index d) {
  int pos = static_cast<int>(tuple.size()) - 1;
  while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == d - 1) --pos;
  if (pos < 0) return false;
  const Index next = tuple[static_cast<std::size_t>(pos)] + 1;
  for (std::size_t i = static_cast<std::size_t>(pos); i < tuple.size(); ++i) tuple[i] = next;
  return true;
}

/// Rank-preserving row compression: the triangular factor of [R; block]
/// has the same Gram matrix, hence the same singular values and null
/// space, as the full stack of every block seen so far.
class QrAccumulator {
 public:
  explicit QrAccumulator(Index cols) : r_(ComplexMatrix::Zero(cols, cols)), work_(2 * cols, cols) {}

  void absorb(const ComplexMatrix& block) {
    work_.topRows(r_.rows()) = r_;
    work_.bottomRows(block.rows()) = block;
    Eigen::HouseholderQR<ComplexMatrix> qr(work_);
    r_ = qr.matrixQR().topRows(r_.rows()).template triangularView<Eigen::Upper>();
  }

  const ComplexMatrix& reduced() const { return r_; }

 private:
  ComplexMatrix r_;
  ComplexMatrix work_;
};

}  // namespace detail

/// The set { B : ad_X^k(B) = 0 for every X in span(basis) }.
///
/// ad_{sum c_i X_i}^k(B) is a degree-k polynomial in the coefficients c;
/// it vanishes identically on the span iff every monomial coefficient
/// vanishes, and the coefficient of c^alpha is the arrangement-symmetrized
/// composition of the lifted ads over the index multiset alpha:
///   sym(M) = sum over distinct i in M of lift_i * sym(M minus one i),
/// computed level by level over multiset sizes. All symmetrized operators
/// feed one batched null-space computation (a rank-preserving QR reduction
/// followed by a single SVD rank decision), so no per-constraint kernel
/// iteration ever happens.
inline OperatorSubspace symmetrized_ad_kernel(Index n, const std::vector<ComplexMatrix>& basis, int k,
                                              const ToleranceConfig& tol,
                                              std::uint64_t budget = kPolarizationBudget) {
  if (k < 1) throw InputError("symmetrized_ad_kernel: k must be >= 1");
  if (basis.empty()) return OperatorSubspace::full(n);

  const Index d = static_cast<Index>(basis.size());
  const std::uint64_t count =
      detail::multiset_count(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(k), budget);
  if (count > budget) {
    throw ResourceError("symmetrized_ad_kernel: multiset count C(" + std::to_string(d + k - 1) + ", " +
                        std::to_string(k) + ") exceeds budget " + std::to_string(budget));
  }

  std::vector<ComplexMatrix> lifts;
  lifts.reserve(basis.size());
  for (const auto& b : basis) {
    if (b.rows() != n || b.cols() != n) throw DimensionError("symmetrized_ad_kernel: basis dimension mismatch");
    lifts.push_back(ad_lift(b).mat);
  }

  const Index nn = n * n;
  detail::QrAccumulator accumulator(nn);

  if (k == 1) {
    for (const auto& lift : lifts) accumulator.absorb(lift);
    return subspace_from_vecs(n, null_space(accumulator.reduced(), tol));
  }

  // Levels 1..k-1 of the symmetrization recursion, indexed by multiset rank.
  std::vector<ComplexMatrix> prev = lifts;
  for (int level = 2; level < k; ++level) {
    std::vector<ComplexMatrix> cur;
    cur.reserve(static_cast<std::size_t>(
        detail::multiset_count(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(level), budget)));
    std::vector<Index> tuple(static_cast<std::size_t>(level), 0);
    do {
      ComplexMatrix sum = ComplexMatrix::Zero(nn, nn);
      std::vector<Index> reduced_tuple(tuple.begin(), tuple.end() - 1);
      for (std::size_t p = 0; p < tuple.size(); ++p) {
        if (p > 0 && tuple[p] == tuple[p - 1]) continue;  // distinct values only
        std::size_t slot = 0;
        for (std::size_t q = 0; q < tuple.size(); ++q) {
          if (q == p) continue;
          reduced_tuple[slot++] = tuple[q];
        }
        sum += lifts[static_cast<std::size_t>(tuple[p])] *
               prev[detail::multiset_rank(reduced_tuple, d)];
      }
      cur.push_back(std::move(sum));
    } while (detail::advance_multiset(tuple, d));
    prev = std::move(cur);
  }

  // Top level streams straight into the QR reduction.
  std::vector<Index> tuple(static_cast<std::size_t>(k), 0);
  std::vector<Index> reduced_tuple(static_cast<std::size_t>(k - 1), 0);
  ComplexMatrix sum(nn, nn);
  do {
    sum.setZero();
    for (std::size_t p = 0; p < tuple.size(); ++p) {
      if (p > 0 && tuple[p] == tuple[p - 1]) continue;
      std::size_t slot = 0;
      for (std::size_t q = 0; q < tuple.size(); ++q) {
        if (q == p) continue;
        reduced_tuple[slot++] = tuple[q];
      }
      sum += lifts[static_cast<std::size_t>(tuple[p])] * prev[detail::multiset_rank(reduced_tuple, d)];
    }
    accumulator.absorb(sum);
  } while (detail::advance_multiset(tuple, d));

  return subspace_from_vecs(n, null_space(accumulator.reduced(), tol));
}

inline OperatorSubspace symmetrized_ad_kernel(const OperatorSubspace& s, int k, const ToleranceConfig& tol,
                                              std::uint64_t budget = kPolarizationBudget) {
  return symmetrized_ad_kernel(s.ambient_dim, s.basis(), k, tol, budget);
}

/// C_k(C_l(A)): the k-centralizer of the whole l-centralizer of A.
inline OperatorSubspace double_centralizer(const ComplexMatrix& a, int k, int l, const ToleranceConfig& tol,
                                           std::uint64_t budget = kPolarizationBudget) {
  if (k < 1) throw InputError("double_centralizer: k must be >= 1");
  if (l < 1) throw InputError("double_centralizer: l must be >= 1");
  return symmetrized_ad_kernel(centralizer(a, l, tol), k, tol, budget);
}

/// Monte-Carlo cross-check of the polarization route: intersects the
/// kernels of ad_X^k over pseudo-random span elements X, in batches of
/// `samples`, until the dimension is unchanged for two consecutive
/// batches. Always a superset of the polarized kernel.
inline OperatorSubspace randomized_set_centralizer(Index n, const std::vector<ComplexMatrix>& basis, int k,
                                                   const ToleranceConfig& tol, int samples,
                                                   std::uint64_t seed) {
  if (k < 1) throw InputError("randomized_set_centralizer: k must be >= 1");
  if (samples < 1) throw InputError("randomized_set_centralizer: samples must be >= 1");
  if (basis.empty()) return OperatorSubspace::full(n);

  const Index nn = n * n;
  Rng rng(seed);
  ComplexMatrix current = ComplexMatrix::Identity(nn, nn);  // kernel candidate, orthonormal columns
  int stable_rounds = 0;
  Index prev_dim = current.cols();

  // Dimension can only shrink, so n^2 + 2 batches always suffice.
  for (Index round = 0; round < nn + 2 && current.cols() > 0; ++round) {
    ComplexMatrix stacked(static_cast<Index>(samples) * nn, current.cols());
    for (int j = 0; j < samples; ++j) {
      ComplexMatrix x = ComplexMatrix::Zero(n, n);
      for (const auto& b : basis) x += rng.complex_gaussian() * b;
      const LiftedOperator lifted = lifted_power(ad_lift(x), k);
      stacked.middleRows(static_cast<Index>(j) * nn, nn) = lifted.mat * current;
    }
    current = current * null_space(stacked, tol);

    if (current.cols() == prev_dim) {
      if (++stable_rounds >= 2) break;
    } else {
      stable_rounds = 0;
    }
    prev_dim = current.cols();
  }
  return subspace_from_vecs(n, std::move(current));
}

}  // namespace centralab
