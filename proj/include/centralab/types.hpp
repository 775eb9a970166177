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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace centralab {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical policy shared by every operation. All cutoffs are relative
/// where a natural scale exists; see the individual operations for how
/// each field is applied.
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;   // singular values below rank_rel_tol * sigma_max count as zero
  double containment_tol = 1e-7; // max projection residual for subspace containment
  double zero_tol = 1e-9;        // operator-norm threshold for "is zero"
  double cluster_tol = 1e-7;     // single-linkage radius for eigenvalue clustering

  void validate() const {
    if (!(rank_rel_tol > 0.0 && containment_tol > 0.0 && zero_tol > 0.0 && cluster_tol > 0.0)) {
      throw std::invalid_argument("ToleranceConfig: all tolerances must be strictly positive");
    }
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or non-square shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Bad arguments, violated preconditions, unreadable or malformed input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A configured combinatorial or memory budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same object disagree beyond
/// tolerance; signals a numerics bug rather than bad input.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

inline void require_square_finite(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
  }
}

}  // namespace centralab
