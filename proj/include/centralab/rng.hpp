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

#include <cmath>
#include <cstdint>

namespace centralab {

/// splitmix64 stream. Self-contained so that draws are reproducible across
/// standard libraries (std::normal_distribution has no pinned algorithm).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Index uniform_index(Index n) { return static_cast<Index>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  ComplexVector gaussian_vector(Index n) {
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_gaussian();
    return v;
  }

  ComplexMatrix gaussian_matrix(Index n) {
    ComplexMatrix m(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) m(i, j) = complex_gaussian();
    return m;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  Rng mixer(base ^ (0xA24BAED4963EE407ULL + stream * 0x9FB21C651E98DF25ULL));
  mixer.next_u64();
  return mixer.next_u64();
}

}  // namespace centralab
