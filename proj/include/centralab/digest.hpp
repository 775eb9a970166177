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

#include <cstdint>
#include <cstring>
#include <string>

namespace centralab {

/// FNV-1a over the dimension and the raw entry bytes (row-major, re then
/// im). Content hash for audit trails, not a cryptographic digest.
inline std::string matrix_digest(const ComplexMatrix& a) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const auto absorb = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t n = static_cast<std::uint64_t>(a.rows());
  absorb(&n, sizeof(n));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const double re = a(i, j).real();
      const double im = a(i, j).imag();
      absorb(&re, sizeof(re));
      absorb(&im, sizeof(im));
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

}  // namespace centralab
