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

#include <centralab/ad_calculus.hpp>
#include <centralab/matrix_space.hpp>

#include <string>
#include <vector>

namespace centralab {

/// Orthonormal basis of span{I, A, A^2, ...}, extended until the dimension
/// stabilizes; that happens at the degree of the minimal polynomial, so the
/// dimension never exceeds n. Powers are renormalized as they are chained
/// so rank decisions are not distorted by ||A||^j growth.
inline OperatorSubspace pol_hull(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square_finite(a, "pol_hull");
  const Index n = a.rows();
  std::vector<ComplexMatrix> powers{ComplexMatrix::Identity(n, n)};
  ComplexMatrix direction = powers.front();
  OperatorSubspace hull = orthonormalize(n, powers, tol);
  for (Index j = 1; j <= n; ++j) {
    direction = a * direction;
    const double norm = direction.norm();
    if (norm == 0.0) break;
    direction /= norm;
    powers.push_back(direction);
    OperatorSubspace next = orthonormalize(n, powers, tol);
    if (next.dim() == hull.dim()) break;
    hull = std::move(next);
  }
  return hull;
}

/// The unital *-algebra generated by the given matrices: start from
/// {I} + generators + adjoints, adjoin pairwise products and
/// re-orthonormalize until the dimension stops growing.
inline OperatorSubspace star_algebra_hull(const std::vector<ComplexMatrix>& generators,
                                          const ToleranceConfig& tol) {
  if (generators.empty()) throw InputError("star_algebra_hull: empty generator list");
  const Index n = generators.front().rows();
  require_square_finite(generators.front(), "star_algebra_hull");

  std::vector<ComplexMatrix> seed{ComplexMatrix::Identity(n, n)};
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw DimensionError("star_algebra_hull: generator dimension mismatch");
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  OperatorSubspace current = orthonormalize(n, seed, tol);

  for (Index round = 0; round < n * n + 2; ++round) {
    std::vector<ComplexMatrix> extended = current.basis();
    const std::vector<ComplexMatrix> base = extended;
    for (const auto& x : base)
      for (const auto& y : base) extended.push_back(x * y);
    OperatorSubspace next = orthonormalize(n, extended, tol);
    if (next.dim() == current.dim()) return current;
    current = std::move(next);
  }
  throw IntegrityError("star_algebra_hull: closure failed to stabilize within n^2 + 2 rounds");
}

/// { X : XY = YX for every Y in S }. The constraint is linear in Y, so the
/// joint ad-kernel over a basis of S suffices. The commutant of the zero
/// subspace is all of matrix space.
inline OperatorSubspace commutant(const OperatorSubspace& s, const ToleranceConfig& tol) {
  const Index n = s.ambient_dim;
  const Index nn = n * n;
  if (s.dim() == 0) return OperatorSubspace::full(n);
  ComplexMatrix stacked(s.dim() * nn, nn);
  for (Index i = 0; i < s.dim(); ++i) {
    stacked.middleRows(i * nn, nn) = ad_lift(s.basis_matrix(i)).mat;
  }
  return subspace_from_vecs(n, null_space(stacked, tol));
}

/// The von Neumann algebra generated by A and the identity, computed by
/// both the generated-*-algebra route and the double-commutant route; the
/// two must agree within containment_tol or the call fails with an
/// integrity error. The generated-algebra basis is returned.
///
/// Note: for non-normal A this *-closed algebra can strictly exceed the
/// non-*-closed double commutant of {A} alone; the double-commutant route
/// therefore starts from the *-closed span of {A, A*}.
inline OperatorSubspace vn_hull(const ComplexMatrix& a, const ToleranceConfig& tol) {
  require_square_finite(a, "vn_hull");
  const Index n = a.rows();
  const OperatorSubspace generated = star_algebra_hull({a}, tol);
  const OperatorSubspace star_span = orthonormalize(n, {a, ComplexMatrix(a.adjoint())}, tol);
  const OperatorSubspace bicommutant = commutant(commutant(star_span, tol), tol);

  const ContainmentResult fwd = subspace_contains(bicommutant, generated, tol);
  const ContainmentResult bwd = subspace_contains(generated, bicommutant, tol);
  if (!fwd.contained || !bwd.contained) {
    throw IntegrityError(
        "vn_hull: generated algebra and double commutant disagree (residuals " +
        std::to_string(fwd.residual) + ", " + std::to_string(bwd.residual) + ")");
  }
  return generated;
}

}  // namespace centralab
