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

#include <centralab/certify.hpp>

#include <string>
#include <vector>

namespace centralab {

/// Top-left n x n compression of the unilateral shift e_i -> e_{i+1}:
/// ones on the first subdiagonal. The compression trades the isometry
/// property for nilpotency of order exactly n; the second-difference
/// structure of its 2-centralizer survives on interior indices.
inline ComplexMatrix shift_truncation(Index n) {
  if (n < 2) throw InputError("shift_truncation: n must be >= 2");
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) j(i + 1, i) = 1.0;
  return j;
}

inline constexpr double kShiftStructureResidualBound = 1e-8;

/// One linear condition on the entries of a candidate 2-centralizer
/// element, in the row families of the infinite-shift computation:
/// family 1: x(1, j+2) = 0
/// family 2: -2 x(1, j+1) + x(2, j+2) = 0
/// family 3: x(k-2, j) - 2 x(k-1, j+1) + x(k, j+2) = 0, k >= 3
/// Indices are 1-based like the source computation; a condition is
/// "interior" when every referenced entry lies inside the truncation.
struct ShiftCondition {
  int family = 1;
  Index row = 1;   // k (family 3), 1 or 2 otherwise
  Index col = 1;   // j
  double residual = 0.0;
};

struct ShiftStructureReport {
  Index n = 0;
  Index dim_c2 = 0;
  std::vector<ShiftCondition> interior;  // all in-range conditions with worst-case residuals
  double max_interior_residual = 0.0;
  bool interior_ok = false;  // every interior residual <= 1e-8
};

/// Evaluates every interior structure condition of the shift's
/// 2-centralizer against the computed kernel basis. The interior window is
/// discovered by evaluation (every condition whose entries are all
/// in-range), not assumed from a closed form.
inline ShiftStructureReport c2_structure_check(Index n, const ToleranceConfig& tol) {
  if (n < 6) throw InputError("c2_structure_check: n must be >= 6");
  const ComplexMatrix shift = shift_truncation(n);
  const OperatorSubspace c2 = centralizer(shift, 2, tol);

  ShiftStructureReport report;
  report.n = n;
  report.dim_c2 = c2.dim();

  const std::vector<ComplexMatrix> basis = c2.basis();
  const auto entry = [&](const ComplexMatrix& x, Index row1, Index col1) {  // 1-based
    return x(row1 - 1, col1 - 1);
  };
  const auto record = [&](int family, Index k, Index j, const auto& functional) {
    double worst = 0.0;
    for (const auto& x : basis) worst = std::max(worst, std::abs(functional(x)));
    report.interior.push_back({family, k, j, worst});
    report.max_interior_residual = std::max(report.max_interior_residual, worst);
  };

  for (Index j = 1; j + 2 <= n; ++j) {
    record(1, 1, j, [&](const ComplexMatrix& x) { return entry(x, 1, j + 2); });
    record(2, 2, j, [&](const ComplexMatrix& x) { return -2.0 * entry(x, 1, j + 1) + entry(x, 2, j + 2); });
    for (Index k = 3; k <= n; ++k) {
      record(3, k, j, [&](const ComplexMatrix& x) {
        return entry(x, k - 2, j) - 2.0 * entry(x, k - 1, j + 1) + entry(x, k, j + 2);
      });
    }
  }
  report.interior_ok = report.max_interior_residual <= kShiftStructureResidualBound;
  return report;
}

/// The two constraint operators the infinite computation derives from
/// 2-centralizer elements: the parameter choice x11 = 1 gives the diagonal
/// diag(1, 0, -1, ..., -(n-2)); the choice x12 = 1 gives the weighted
/// superdiagonal with entry k at (k, k+1).
inline ComplexMatrix shift_c2_probe_diagonal(Index n) {
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  x(0, 0) = 1.0;
  for (Index k = 3; k <= n; ++k) x(k - 1, k - 1) = -double(k - 2);
  return x;
}

inline ComplexMatrix shift_c2_probe_superdiagonal(Index n) {
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) x(k - 1, k) = double(k);
  return x;
}

/// Does the diagonal candidate B = diag(entries) satisfy the second-order
/// commutator conditions of both probe operators on interior indices?
/// For the superdiagonal probe the interior entries of ad_X^2(B) are
/// k (k+1) times the second differences of the diagonal, so the test
/// passes exactly for arithmetic progressions.
inline bool diag_progression_satisfies(const ComplexVector& entries) {
  const Index n = entries.size();
  if (n < 4) throw InputError("diag_progression_satisfies: need n >= 4");
  const ComplexMatrix b = ComplexMatrix(entries.asDiagonal());
  const double scale = (1.0 + entries.cwiseAbs().maxCoeff()) * double(n) * double(n);
  const double bound = kShiftStructureResidualBound * scale;

  const ComplexMatrix probe1 = shift_c2_probe_diagonal(n);
  if (ad_power_apply(probe1, b, 2).norm() > bound) return false;

  const ComplexMatrix probe2 = shift_c2_probe_superdiagonal(n);
  const ComplexMatrix second = ad_power_apply(probe2, b, 2);
  double worst = 0.0;
  for (Index k = 1; k + 2 <= n; ++k) worst = std::max(worst, std::abs(second(k - 1, k + 1)));
  return worst <= bound;
}

/// Battery form of the progression law: arithmetic progressions must pass,
/// diagonals with a nonzero interior second difference must fail.
inline bool diag_progression_check(Index n, const ToleranceConfig& tol) {
  if (n < 4) throw InputError("diag_progression_check: n must be >= 4");
  tol.validate();
  ComplexVector ones = ComplexVector::Ones(n);
  ComplexVector ramp(n), squares(n);
  for (Index i = 0; i < n; ++i) {
    ramp(i) = double(i + 1);
    squares(i) = double((i + 1) * (i + 1));
  }
  if (!diag_progression_satisfies(ones)) return false;
  if (!diag_progression_satisfies(ramp)) return false;
  if (diag_progression_satisfies(squares)) return false;

  Rng rng(0xD1A6ULL);
  for (int trial = 0; trial < 8; ++trial) {
    const Complex start = rng.complex_gaussian();
    const Complex step = rng.complex_gaussian();
    ComplexVector ap(n);
    for (Index i = 0; i < n; ++i) ap(i) = start + double(i) * step;
    if (!diag_progression_satisfies(ap)) return false;

    ComplexVector bent = ap;
    const Index kink = 1 + rng.uniform_index(n - 2);
    bent(kink) += Complex(1.0 + rng.uniform(), 0.0);
    if (diag_progression_satisfies(bent)) return false;
  }
  return true;
}

/// Smiley certificate for the truncated shift. Classical Smiley holds for
/// every finite truncation, so is_proper is the expected verdict; the
/// infinite-dimensional identity C_2(C_2(shift)) = C I is deliberately not
/// asserted here, only the dimension is recorded via the certificate.
inline SmileyCertificate truncated_smiley(Index n, int k, int l, const ToleranceConfig& tol) {
  if (n < 2) throw InputError("truncated_smiley: n must be >= 2");
  if (k != 1 && k != 2) throw InputError("truncated_smiley: k must be 1 or 2");
  if (k > l) throw InputError("truncated_smiley: need k <= l");
  return certify_smiley(shift_truncation(n), k, l, tol);
}

}  // namespace centralab
