#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace centralab;
using test_helpers::unit;

namespace {
const ToleranceConfig tol;
}

TEST_CASE("hs_inner on matrix units and identities") {
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  CHECK(hs_inner(eye, eye) == Complex(2.0, 0.0));
  CHECK(hs_inner(unit(2, 0, 0), unit(2, 1, 1)) == Complex(0.0, 0.0));
  CHECK(hs_inner(unit(2, 0, 1), unit(2, 0, 1)) == Complex(1.0, 0.0));
}

TEST_CASE("hs_inner is conjugate symmetric and positive definite") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix x = rng.gaussian_matrix(3);
    const ComplexMatrix y = rng.gaussian_matrix(3);
    const Complex fwd = hs_inner(x, y);
    const Complex bwd = hs_inner(y, x);
    CHECK(std::abs(fwd - std::conj(bwd)) < 1e-12);
    CHECK(hs_inner(x, x).real() > 0.0);
    CHECK(std::abs(hs_inner(x, x).imag()) < 1e-12);
  }
}

TEST_CASE("hs_inner rejects mismatched dimensions") {
  CHECK_THROWS_AS(hs_inner(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("vectorization is column-stacking") {
  ComplexMatrix x(2, 2);
  x << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0);  // row-major fill
  const ComplexVector v = vectorize(x);
  CHECK(v(0) == Complex(1, 0));  // x11
  CHECK(v(1) == Complex(2, 0));  // x21
  CHECK(v(2) == Complex(3, 0));  // x12
  CHECK(v(3) == Complex(4, 0));  // x22
  CHECK(unvectorize(v, 2) == x);
}

TEST_CASE("null_space on the spec kernels") {
  CHECK(null_space(ComplexMatrix::Zero(4, 4), tol).cols() == 4);
  CHECK(null_space(ComplexMatrix::Identity(4, 4), tol).cols() == 0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  const ComplexMatrix kernel = null_space(d, tol);
  REQUIRE(kernel.cols() == 1);
  CHECK(std::abs(kernel(0, 0)) < 1e-14);
  CHECK(std::abs(std::abs(kernel(1, 0)) - 1.0) < 1e-14);
}

TEST_CASE("null_space rejects non-finite input") {
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(null_space(bad, tol), InputError);
}

TEST_CASE("null_space vectors are numerically annihilated") {
  // Rank-deficient rectangles and squares; the kernel residual must stay
  // within 10x the rank cutoff.
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + rng.uniform_index(4);
    const Index r = 1 + rng.uniform_index(n - 1);
    const ComplexMatrix m = rng.gaussian_matrix(n).leftCols(r) * rng.gaussian_matrix(n).topRows(r);
    const ComplexMatrix kernel = null_space(m, tol);
    CHECK(kernel.cols() == n - r);
    const double sigma_max = m.operatorNorm();
    for (Index c = 0; c < kernel.cols(); ++c) {
      CHECK((m * kernel.col(c)).norm() <= 10.0 * tol.rank_rel_tol * sigma_max);
    }
  }
}

TEST_CASE("orthonormalize on the spec spans") {
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  CHECK(orthonormalize(2, {eye, 2.0 * eye}, tol).dim() == 1);
  CHECK(orthonormalize(2, {unit(2, 0, 0), unit(2, 0, 1)}, tol).dim() == 2);
  CHECK(orthonormalize(2, {}, tol).dim() == 0);
}

TEST_CASE("orthonormalize is idempotent") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ComplexMatrix> mats;
    for (int i = 0; i < 5; ++i) mats.push_back(rng.gaussian_matrix(3));
    mats.push_back(mats[0] + mats[1]);  // force rank deficiency
    const OperatorSubspace first = orthonormalize(3, mats, tol);
    const OperatorSubspace second = orthonormalize(3, first.basis(), tol);
    REQUIRE(second.dim() == first.dim());
    const ComplexMatrix gram_first = first.vecs.adjoint() * first.vecs;
    const ComplexMatrix gram_second = second.vecs.adjoint() * second.vecs;
    CHECK((gram_first - gram_second).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("subspace_intersect on shared and disjoint units") {
  const OperatorSubspace u = orthonormalize(2, {unit(2, 0, 0), unit(2, 0, 1)}, tol);
  const OperatorSubspace v = orthonormalize(2, {unit(2, 0, 0), unit(2, 1, 0)}, tol);
  const OperatorSubspace meet = subspace_intersect(u, v, tol);
  REQUIRE(meet.dim() == 1);
  CHECK(std::abs(std::abs(hs_inner(meet.basis_matrix(0), unit(2, 0, 0))) - 1.0) < 1e-10);

  const OperatorSubspace self = subspace_intersect(u, u, tol);
  CHECK(test_helpers::subspaces_equal(self, u, tol));

  const OperatorSubspace e11 = orthonormalize(2, {unit(2, 0, 0)}, tol);
  const OperatorSubspace e22 = orthonormalize(2, {unit(2, 1, 1)}, tol);
  CHECK(subspace_intersect(e11, e22, tol).dim() == 0);
}

TEST_CASE("subspace_intersect respects the Grassmann bound and containment") {
  Rng rng(41);
  const Index n = 3;
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<ComplexMatrix> us, vs;
    const Index du = 4 + rng.uniform_index(4);
    const Index dv = 4 + rng.uniform_index(4);
    for (Index i = 0; i < du; ++i) us.push_back(rng.gaussian_matrix(n));
    for (Index i = 0; i < dv; ++i) vs.push_back(rng.gaussian_matrix(n));
    const OperatorSubspace u = orthonormalize(n, us, tol);
    const OperatorSubspace v = orthonormalize(n, vs, tol);
    const OperatorSubspace meet = subspace_intersect(u, v, tol);
    CHECK(meet.dim() >= u.dim() + v.dim() - n * n);
    CHECK(subspace_contains(u, meet, tol).contained);
    CHECK(subspace_contains(v, meet, tol).contained);
  }
}

TEST_CASE("subspace_contains on the spec examples") {
  const OperatorSubspace full = OperatorSubspace::full(2);
  const OperatorSubspace span_i = orthonormalize(2, {ComplexMatrix::Identity(2, 2)}, tol);
  const ContainmentResult everything = subspace_contains(full, span_i, tol);
  CHECK(everything.contained);
  CHECK(everything.residual < 1e-12);

  const OperatorSubspace e11 = orthonormalize(2, {unit(2, 0, 0)}, tol);
  const OperatorSubspace e22 = orthonormalize(2, {unit(2, 1, 1)}, tol);
  const ContainmentResult disjoint = subspace_contains(e11, e22, tol);
  CHECK_FALSE(disjoint.contained);
  CHECK(disjoint.residual == Catch::Approx(1.0).margin(1e-12));

  CHECK(subspace_contains(e11, e11, tol).contained);
}

TEST_CASE("mutual containment forces equal dimension") {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ComplexMatrix> mats;
    const Index d = 2 + rng.uniform_index(5);
    for (Index i = 0; i < d; ++i) mats.push_back(rng.gaussian_matrix(3));
    const OperatorSubspace u = orthonormalize(3, mats, tol);
    // Same span, different generating order.
    std::reverse(mats.begin(), mats.end());
    mats.push_back(mats[0] - 0.5 * mats[1]);
    const OperatorSubspace v = orthonormalize(3, mats, tol);
    if (subspace_contains(u, v, tol).contained && subspace_contains(v, u, tol).contained) {
      CHECK(u.dim() == v.dim());
    } else {
      FAIL("same span must be mutually containing");
    }
  }
}

TEST_CASE("empty subspace is a first-class value") {
  const OperatorSubspace empty = OperatorSubspace::zero(2);
  const OperatorSubspace full = OperatorSubspace::full(2);
  CHECK(subspace_intersect(empty, full, tol).dim() == 0);
  CHECK(subspace_contains(full, empty, tol).contained);
  CHECK(subspace_contains(empty, empty, tol).contained);
  CHECK_FALSE(subspace_contains(empty, full, tol).contained);
}

TEST_CASE("ambient mismatch is rejected") {
  CHECK_THROWS_AS(subspace_intersect(OperatorSubspace::full(2), OperatorSubspace::full(3), tol),
                  DimensionError);
  CHECK_THROWS_AS(subspace_contains(OperatorSubspace::full(2), OperatorSubspace::full(3), tol),
                  DimensionError);
}
