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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace centralab {

inline bool is_normal(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square_finite(a, "is_normal");
  const double defect = (a * a.adjoint() - a.adjoint() * a).norm();
  return defect <= tol.zero_tol * a.norm() * a.norm();
}

inline bool is_selfadjoint(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square_finite(a, "is_selfadjoint");
  return (a - a.adjoint()).norm() <= tol.zero_tol * a.norm();
}

/// X = Re + i Im with both parts self-adjoint.
inline std::pair<ComplexMatrix, ComplexMatrix> re_im_parts(const ComplexMatrix& x) {
  require_square_finite(x, "re_im_parts");
  const ComplexMatrix adj = x.adjoint();
  return {0.5 * (x + adj), (x - adj) / Complex(0.0, 2.0)};
}

/// Smallest j with ||N^j|| <= zero_tol * (1 + ||N||)^j. Throws InputError
/// when no j <= n qualifies, which is exactly the non-nilpotent case (an
/// eigenvalue cluster away from zero forces ||N^n|| to stay large).
inline int nilpotency_order(const ComplexMatrix& nil, const ToleranceConfig& tol) {
  require_square_finite(nil, "nilpotency_order");
  const Index n = nil.rows();
  const double base = 1.0 + nil.norm();
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  double scale = 1.0;
  for (int j = 1; j <= n; ++j) {
    power = power * nil;
    scale *= base;
    if (power.norm() <= tol.zero_tol * scale) return j;
  }
  throw InputError("nilpotency_order: matrix is not numerically nilpotent");
}

/// One spectral projector with its clustered eigenvalue representative.
struct SpectralComponent {
  Complex eigenvalue;
  ComplexMatrix projector;
};

/// A = scalar_part + nilpotent_part with commuting parts, scalar_part
/// diagonalizable, nilpotent_part of order nilpotency_type + 1.
struct CanonicalDecomposition {
  ComplexMatrix scalar_part;
  ComplexMatrix nilpotent_part;
  int nilpotency_type = 0;
  std::vector<SpectralComponent> components;
  std::vector<std::string> warnings;
  bool invariants_ok = true;  // false when a decomposition invariant misses its tolerance
};

namespace detail {

/// Unitary similarity exchanging the diagonal entries k, k+1 of the upper
/// triangular t, accumulated into q. The rotation maps e1 onto the
/// eigenvector of the trailing diagonal entry, as in LAPACK's ztrexc.
inline void swap_schur_entries(ComplexMatrix& t, ComplexMatrix& q, Index k) {
  const Complex a = t(k, k);
  const Complex b = t(k, k + 1);
  const Complex c = t(k + 1, k + 1);
  Eigen::Vector2cd v;
  v << b, c - a;
  const double beta = v.norm();
  if (beta == 0.0) return;  // already decoupled with equal entries
  v /= beta;
  Eigen::Matrix2cd g;
  g << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t(k + 1, k) = Complex(0.0, 0.0);
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
}

/// Solves A X - X B = C for upper triangular A (p x p) and B (q x q) with
/// disjoint diagonals, column by column.
inline ComplexMatrix solve_triangular_sylvester(const ComplexMatrix& a, const ComplexMatrix& b,
                                                const ComplexMatrix& c) {
  const Index p = a.rows();
  const Index q = b.rows();
  ComplexMatrix x(p, q);
  for (Index j = 0; j < q; ++j) {
    ComplexVector rhs = c.col(j);
    if (j > 0) rhs += x.leftCols(j) * b.block(0, j, j, 1);
    ComplexMatrix shifted = a;
    shifted.diagonal().array() -= b(j, j);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

/// Single-linkage connected components of the eigenvalue list at the given
/// radius; returns per-index cluster ids (not yet ordered).
inline std::vector<int> single_linkage(const ComplexVector& values, double radius) {
  const Index n = values.size();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  const auto find = [&](Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= radius) parent[static_cast<std::size_t>(find(j))] = find(i);

  std::vector<int> id(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    if (id[static_cast<std::size_t>(root)] < 0) id[static_cast<std::size_t>(root)] = next++;
    id[static_cast<std::size_t>(i)] = id[static_cast<std::size_t>(root)];
  }
  return id;
}

}  // namespace detail

/// Canonical decomposition A = S + N.
///
/// Schur form, single-linkage eigenvalue clustering at cluster_tol with the
/// cluster mean as representative, then one spectral projector per cluster
/// via reordering that cluster to the leading Schur block and solving the
/// triangular Sylvester equation for the block resolvent. Numerical
/// defects (borderline clusters, invariant residuals) are reported as
/// warnings on the result, never as errors, so sweeps keep going.
///
/// Defective clusters scatter their computed eigenvalues like eps^(1/q)
/// (q the Jordan block size); cluster_tol must sit above that scatter for
/// the decomposition to see them as one eigenvalue. Cluster means cancel
/// the scatter to first order, which is why the representative is the mean.
inline CanonicalDecomposition jordan_chevalley(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square_finite(a, "jordan_chevalley");
  tol.validate();
  const Index n = a.rows();
  if (n == 0) throw InputError("jordan_chevalley: empty matrix");

  Eigen::ComplexSchur<ComplexMatrix> schur(a, true);
  if (schur.info() != Eigen::Success) throw InputError("jordan_chevalley: Schur decomposition failed");
  const ComplexMatrix t0 = schur.matrixT();
  const ComplexMatrix q0 = schur.matrixU();
  const ComplexVector eigs = t0.diagonal();

  const std::vector<int> cluster_of = detail::single_linkage(eigs, tol.cluster_tol);
  const int num_clusters = 1 + *std::max_element(cluster_of.begin(), cluster_of.end());

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(num_clusters));
  for (Index i = 0; i < n; ++i) members[static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(i)])].push_back(i);

  std::vector<Complex> reps(static_cast<std::size_t>(num_clusters));
  for (int c = 0; c < num_clusters; ++c) {
    Complex sum = 0.0;
    for (Index i : members[static_cast<std::size_t>(c)]) sum += eigs(i);
    reps[static_cast<std::size_t>(c)] = sum / double(members[static_cast<std::size_t>(c)].size());
  }

  std::vector<int> order(static_cast<std::size_t>(num_clusters));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const Complex& u = reps[static_cast<std::size_t>(x)];
    const Complex& v = reps[static_cast<std::size_t>(y)];
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
  });

  CanonicalDecomposition out;

  for (int ci = 0; ci < num_clusters; ++ci)
    for (int cj = ci + 1; cj < num_clusters; ++cj) {
      const double gap = std::abs(reps[static_cast<std::size_t>(ci)] - reps[static_cast<std::size_t>(cj)]);
      if (gap <= tol.cluster_tol) {
        out.warnings.push_back("cluster representatives closer than cluster_tol; clustering unreliable");
      } else if (gap <= 2.0 * tol.cluster_tol) {
        out.warnings.push_back("ambiguous eigenvalue clustering: representatives within 2*cluster_tol");
      }
    }

  for (int oc : order) {
    const auto& mem = members[static_cast<std::size_t>(oc)];
    const Index s = static_cast<Index>(mem.size());
    ComplexMatrix proj;
    if (s == n) {
      proj = ComplexMatrix::Identity(n, n);
    } else {
      ComplexMatrix t = t0;
      ComplexMatrix q = q0;
      // Bubble this cluster's eigenvalues to the leading positions,
      // preserving their internal order; members are ascending, so moving
      // an earlier one never shifts a later one.
      Index target = 0;
      for (Index p : mem) {
        for (Index k = p; k > target; --k) detail::swap_schur_entries(t, q, k - 1);
        ++target;
      }
      const ComplexMatrix t11 = t.topLeftCorner(s, s);
      const ComplexMatrix t22 = t.bottomRightCorner(n - s, n - s);
      const ComplexMatrix t12 = t.topRightCorner(s, n - s);
      const ComplexMatrix r = detail::solve_triangular_sylvester(t11, t22, t12);
      ComplexMatrix pt = ComplexMatrix::Zero(n, n);
      pt.topLeftCorner(s, s) = ComplexMatrix::Identity(s, s);
      pt.topRightCorner(s, n - s) = r;
      proj = q * pt * q.adjoint();
    }
    out.components.push_back({reps[static_cast<std::size_t>(oc)], std::move(proj)});
  }

  ComplexMatrix scalar = ComplexMatrix::Zero(n, n);
  for (const auto& comp : out.components) scalar += comp.eigenvalue * comp.projector;
  out.scalar_part = std::move(scalar);
  out.nilpotent_part = a - out.scalar_part;

  try {
    out.nilpotency_type = nilpotency_order(out.nilpotent_part, tol) - 1;
  } catch (const InputError&) {
    // Fall back to the order with the smallest scaled power norm.
    const double base = 1.0 + out.nilpotent_part.norm();
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    double scale = 1.0, best = std::numeric_limits<double>::infinity();
    int best_j = static_cast<int>(n);
    for (int j = 1; j <= n; ++j) {
      power = power * out.nilpotent_part;
      scale *= base;
      if (power.norm() / scale < best) {
        best = power.norm() / scale;
        best_j = j;
      }
    }
    out.nilpotency_type = best_j - 1;
    out.warnings.push_back("nilpotent part misses the zero_tol threshold; reported order is best-effort");
    out.invariants_ok = false;
  }

  // Invariant self-checks surface as warnings so callers can audit.
  const double commute = (out.scalar_part * out.nilpotent_part - out.nilpotent_part * out.scalar_part).norm();
  if (commute > tol.zero_tol * (1.0 + out.scalar_part.norm() * out.nilpotent_part.norm())) {
    out.warnings.push_back("S and N fail to commute within zero_tol");
    out.invariants_ok = false;
  }
  ComplexMatrix psum = ComplexMatrix::Zero(n, n);
  for (const auto& comp : out.components) psum += comp.projector;
  if ((psum - ComplexMatrix::Identity(n, n)).norm() > tol.zero_tol * std::max(1.0, psum.norm())) {
    out.warnings.push_back("spectral projectors fail to resolve the identity within zero_tol");
    out.invariants_ok = false;
  }
  for (std::size_t i = 0; i < out.components.size(); ++i) {
    for (std::size_t j = 0; j < out.components.size(); ++j) {
      const ComplexMatrix prod = out.components[i].projector * out.components[j].projector;
      const ComplexMatrix expected = (i == j) ? out.components[i].projector : ComplexMatrix::Zero(n, n);
      const double scale = std::max(1.0, out.components[i].projector.norm() * out.components[j].projector.norm());
      if ((prod - expected).norm() > tol.zero_tol * scale) {
        out.warnings.push_back("spectral projectors are not orthogonal idempotents within zero_tol");
        out.invariants_ok = false;
        goto projector_check_done;
      }
    }
  }
projector_check_done:
  return out;
}

/// Haar-like random unitary: QR of a complex Gaussian with the phases fixed
/// so the triangular factor has positive diagonal.
inline ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = rng.gaussian_matrix(n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
  }
  return q;
}

/// U D U* with Haar-like U and a random diagonal whose entries keep a
/// minimum mutual gap, so downstream kernel cutoffs are well-posed.
inline ComplexMatrix random_normal(Index n, std::uint64_t seed) {
  if (n < 1) throw InputError("random_normal: n must be >= 1");
  Rng rng(seed);
  ComplexVector diag(n);
  for (int attempt = 0; attempt < 256; ++attempt) {
    for (Index i = 0; i < n; ++i) diag(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    double min_gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) min_gap = std::min(min_gap, std::abs(diag(i) - diag(j)));
    if (n == 1 || min_gap >= 0.05) break;
  }
  const ComplexMatrix u = random_unitary(n, rng);
  return u * diag.asDiagonal() * u.adjoint();
}

struct SpectralInstance {
  ComplexMatrix matrix;
  CanonicalDecomposition truth;
};

/// Random spectral operator of exact type m with its ground-truth
/// decomposition: block-diagonal eigenvalues (one block of multiplicity
/// >= m+1 hosting a nilpotent of order exactly m+1), conjugated by a
/// random matrix with condition number <= cond_bound. The returned matrix
/// is the stored S + N sum, so the decomposition invariants hold by
/// construction.
inline SpectralInstance random_spectral_of_type(Index n, int m, std::uint64_t seed, double cond_bound) {
  if (m < 0) throw InputError("random_spectral_of_type: m must be >= 0");
  if (n < m + 1) throw InputError("random_spectral_of_type: infeasible, need n >= m + 1");
  if (cond_bound < 1.0) throw InputError("random_spectral_of_type: cond_bound must be >= 1");
  Rng rng(seed);

  // Eigenvalue palette on an integer grid: guaranteed separation 1.
  std::vector<Complex> palette;
  for (int re = -2; re <= 2; ++re)
    for (int im = -2; im <= 2; ++im) palette.emplace_back(re, im);
  for (std::size_t i = palette.size(); i > 1; --i)
    std::swap(palette[i - 1], palette[static_cast<std::size_t>(rng.uniform_index(static_cast<Index>(i)))]);

  Index host = m + 1;
  if (n > host) host += rng.uniform_index(std::min<Index>(2, n - host + 1));
  std::vector<Index> mults{host};
  Index remaining = n - host;
  while (remaining > 0) {
    const Index take = 1 + rng.uniform_index(std::min<Index>(2, remaining));
    mults.push_back(take);
    remaining -= take;
  }

  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  ComplexMatrix n0 = ComplexMatrix::Zero(n, n);
  Index offset = 0;
  for (std::size_t b = 0; b < mults.size(); ++b) {
    for (Index i = 0; i < mults[b]; ++i) d(offset + i, offset + i) = palette[b];
    offset += mults[b];
  }
  const double gamma = 0.5 + 1.5 * rng.uniform();
  for (int i = 0; i < m; ++i) n0(i, i + 1) = gamma;  // J_{m+1} pattern inside the host block

  // Conjugator with condition number at most cond_bound.
  const ComplexMatrix u = random_unitary(n, rng);
  const ComplexMatrix v = random_unitary(n, rng);
  Eigen::VectorXd sigma(n);
  for (Index i = 0; i < n; ++i) sigma(i) = std::pow(cond_bound, rng.uniform() - 0.5);
  const ComplexMatrix p = u * sigma.asDiagonal() * v.adjoint();
  const ComplexMatrix pinv = v * sigma.cwiseInverse().asDiagonal() * u.adjoint();

  SpectralInstance inst;
  inst.truth.scalar_part = p * d * pinv;
  inst.truth.nilpotent_part = p * n0 * pinv;
  inst.truth.nilpotency_type = m;
  inst.matrix = inst.truth.scalar_part + inst.truth.nilpotent_part;

  std::vector<std::pair<Complex, ComplexMatrix>> comps;
  offset = 0;
  for (std::size_t b = 0; b < mults.size(); ++b) {
    ComplexMatrix sel = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < mults[b]; ++i) sel(offset + i, offset + i) = 1.0;
    comps.emplace_back(palette[b], p * sel * pinv);
    offset += mults[b];
  }
  std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });
  for (auto& [eig, proj] : comps) inst.truth.components.push_back({eig, std::move(proj)});
  return inst;
}

}  // namespace centralab
