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
#include <centralab/decomposition.hpp>
#include <centralab/digest.hpp>
#include <centralab/hulls.hpp>

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace centralab {

/// Verdicts and raw residuals for one (A, k, l) containment check.
/// is_smiley targets the von Neumann hull, is_proper the polynomial hull;
/// containment of Pol(A) in VN(A) makes is_proper the stronger verdict.
struct SmileyCertificate {
  int k = 1;
  int l = 1;
  Index dim_cl = 0;
  Index dim_ckcl = 0;
  Index dim_pol = 0;
  Index dim_vn = 0;
  double residual_vn = 0.0;
  double residual_pol = 0.0;
  bool is_smiley = false;
  bool is_proper = false;
  std::vector<std::string> warnings;
  ToleranceConfig tol;
  std::string input_digest;
  std::optional<std::uint64_t> seed;
};

inline SmileyCertificate certify_smiley(const ComplexMatrix& a, int k, int l, const ToleranceConfig& tol,
                                        std::uint64_t budget = kPolarizationBudget) {
  if (k < 1) throw InputError("k must be >= 1");
  if (l < 1) throw InputError("l must be >= 1");
  require_square_finite(a, "certify_smiley");
  tol.validate();

  SmileyCertificate cert;
  cert.k = k;
  cert.l = l;
  cert.tol = tol;
  cert.input_digest = matrix_digest(a);

  const OperatorSubspace cl = centralizer(a, l, tol);
  const OperatorSubspace ckcl = symmetrized_ad_kernel(cl, k, tol, budget);
  const OperatorSubspace pol = pol_hull(a, tol);
  const OperatorSubspace vn = vn_hull(a, tol);

  cert.dim_cl = cl.dim();
  cert.dim_ckcl = ckcl.dim();
  cert.dim_pol = pol.dim();
  cert.dim_vn = vn.dim();

  const ContainmentResult in_vn = subspace_contains(vn, ckcl, tol);
  const ContainmentResult in_pol = subspace_contains(pol, ckcl, tol);
  cert.residual_vn = in_vn.residual;
  cert.residual_pol = in_pol.residual;
  cert.is_smiley = in_vn.contained;
  cert.is_proper = in_pol.contained;
  return cert;
}

struct CentralizerChainReport {
  bool passed = false;
  std::vector<Index> dims;  // dims[s-1] = dim C_s(A) for s = 1..s_max
  double max_residual = 0.0;
};

/// For normal A every s-centralizer collapses onto the commutant; checks
/// dim C_s(A) = dim C_1(A) with mutual containment for 2 <= s <= s_max.
inline CentralizerChainReport lemma21_suite(const ComplexMatrix& a, int s_max, const ToleranceConfig& tol) {
  if (s_max < 1) throw InputError("lemma21_suite: s_max must be >= 1");
  if (!is_normal(a, tol)) throw InputError("lemma21_suite: input is not normal");

  CentralizerChainReport report;
  report.passed = true;
  const OperatorSubspace c1 = centralizer(a, 1, tol);
  report.dims.push_back(c1.dim());
  for (int s = 2; s <= s_max; ++s) {
    const OperatorSubspace cs = centralizer(a, s, tol);
    report.dims.push_back(cs.dim());
    const ContainmentResult fwd = subspace_contains(c1, cs, tol);
    const ContainmentResult bwd = subspace_contains(cs, c1, tol);
    report.max_residual = std::max({report.max_residual, fwd.residual, bwd.residual});
    if (cs.dim() != c1.dim() || !fwd.contained || !bwd.contained) report.passed = false;
  }
  return report;
}

/// Self-adjoint A commuting with X must commute with Re X and Im X.
inline bool lemma22_check(const ComplexMatrix& a, const ComplexMatrix& x, const ToleranceConfig& tol) {
  if (!is_selfadjoint(a, tol)) throw InputError("lemma22_check: input is not self-adjoint");
  const double scale = 1.0 + a.norm() * x.norm();
  if (ad_apply(a, x).norm() > tol.zero_tol * scale) {
    throw InputError("lemma22_check: [A, X] is not numerically zero");
  }
  const auto [re, im] = re_im_parts(x);
  const double bound = 10.0 * tol.zero_tol * scale;
  return ad_apply(a, re).norm() <= bound && ad_apply(a, im).norm() <= bound;
}

inline constexpr double kFugledeBound = 1e-6;

/// Normal A commuting with X must also commute with A*.
inline bool fuglede_check(const ComplexMatrix& a, const ComplexMatrix& x, const ToleranceConfig& tol) {
  if (!is_normal(a, tol)) throw InputError("fuglede_check: input is not normal");
  const double scale = 1.0 + a.norm() * x.norm();
  if (ad_apply(a, x).norm() > tol.zero_tol * scale) {
    throw InputError("fuglede_check: [A, X] is not numerically zero");
  }
  return ad_apply(ComplexMatrix(a.adjoint()), x).norm() <= kFugledeBound * scale;
}

namespace detail {

inline double binomial(int n, int j) {
  double out = 1.0;
  for (int i = 1; i <= j; ++i) out = out * double(n - j + i) / double(i);
  return out;
}

}  // namespace detail

inline constexpr double kBinomialExpansionRelTol = 1e-10;

/// For N of order m+1, ad_N^(2m+1) vanishes: each term of the binomial
/// expansion sum_j (-1)^(2m+1-j) C(2m+1,j) N^j X N^(2m+1-j) carries an
/// N-power of at least m+1. Verifies the lifted power vanishes and that
/// the expansion agrees with the iterated commutator on random inputs.
inline bool ad_nilpotent_vanish_check(const ComplexMatrix& nil, int m, const ToleranceConfig& tol,
                                      std::uint64_t seed = 0x5EEDF00DULL) {
  if (m < 0) throw InputError("ad_nilpotent_vanish_check: m must be >= 0");
  if (nilpotency_order(nil, tol) != m + 1) {
    throw InputError("ad_nilpotent_vanish_check: nilpotency order is not m + 1");
  }
  const Index n = nil.rows();
  const int power = 2 * m + 1;

  const LiftedOperator lift = ad_lift(nil);
  const LiftedOperator lifted_pow = lifted_power(lift, power);
  if (lifted_pow.mat.norm() > tol.zero_tol * std::pow(lift.mat.norm(), power)) return false;

  std::vector<ComplexMatrix> nil_powers{ComplexMatrix::Identity(n, n)};
  for (int j = 1; j <= power; ++j) nil_powers.push_back(nil_powers.back() * nil);

  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix x = rng.gaussian_matrix(n);
    ComplexMatrix expansion = ComplexMatrix::Zero(n, n);
    for (int j = 0; j <= power; ++j) {
      const double sign = ((power - j) % 2 == 0) ? 1.0 : -1.0;
      expansion += sign * detail::binomial(power, j) *
                   (nil_powers[static_cast<std::size_t>(j)] * x * nil_powers[static_cast<std::size_t>(power - j)]);
    }
    const ComplexMatrix iterated = ad_power_apply(nil, x, power);
    const double scale = 1.0 + std::pow(nil.norm(), power) * x.norm();
    if ((expansion - iterated).norm() > kBinomialExpansionRelTol * scale) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Batch experiments

struct BatchConfig {
  enum class Family { explicit_files, random_generic, random_normal, random_type_m, shift_truncation };

  Family family = Family::random_generic;
  std::vector<Index> sizes;
  int m = -1;  // nilpotency type, random_type_m only
  std::vector<std::pair<int, int>> kl_grid;
  std::vector<std::uint64_t> seeds;
  ToleranceConfig tolerances;
  std::string output_path;          // empty means stdout
  std::vector<std::string> files;   // explicit_files only
  double cond_bound = 20.0;
  int threads = 1;

  void validate() const {
    tolerances.validate();
    if (kl_grid.empty()) throw InputError("batch config: kl_grid must be nonempty");
    for (const auto& [k, l] : kl_grid) {
      if (k < 1) throw InputError("k must be >= 1");
      if (l < 1) throw InputError("l must be >= 1");
    }
    if (family != Family::explicit_files && sizes.empty()) {
      throw InputError("batch config: sizes must be nonempty");
    }
    // explicit-files with an empty file list degenerates to an empty report.
    if (family == Family::random_type_m) {
      if (m < 0) throw InputError("batch config: family random-type-m requires m >= 0");
      for (Index n : sizes)
        if (n < m + 1) throw InputError("batch config: random-type-m requires n >= m + 1");
    }
    const bool needs_seeds = family == Family::random_generic || family == Family::random_normal ||
                             family == Family::random_type_m;
    if (needs_seeds && seeds.empty()) throw InputError("batch config: this family requires seeds");
    if (threads < 1) throw InputError("batch config: threads must be >= 1");
  }
};

inline const char* family_name(BatchConfig::Family f) {
  switch (f) {
    case BatchConfig::Family::explicit_files: return "explicit-files";
    case BatchConfig::Family::random_generic: return "random-generic";
    case BatchConfig::Family::random_normal: return "random-normal";
    case BatchConfig::Family::random_type_m: return "random-type-m";
    case BatchConfig::Family::shift_truncation: return "shift-truncation";
  }
  return "unknown";
}

struct InstanceRecord {
  Index index = 0;
  std::string label;
  Index n = 0;
  int k = 1;
  int l = 1;
  std::optional<std::uint64_t> seed;
  std::optional<SmileyCertificate> certificate;
  std::string assertion = "none";  // "is_smiley", "is_proper" or "none"
  bool asserted_pass = true;
  std::string error;
};

struct ReportAggregate {
  Index instances = 0;
  Index certificates = 0;
  Index smiley_true = 0;
  Index proper_true = 0;
  Index asserted = 0;
  Index asserted_failures = 0;
  Index errors = 0;
};

struct ExperimentReport {
  std::string version = kVersion;
  BatchConfig config;
  std::vector<InstanceRecord> instances;
  ReportAggregate aggregate;
  double runtime_ms = 0.0;  // serialized as 0 so reports stay byte-reproducible
};

/// Mixed test-instance generator: Gaussian, derogatory diagonalizable, or
/// conjugated nilpotent shift blocks, chosen by the seed.
inline ComplexMatrix random_mixed_instance(Index n, std::uint64_t seed, std::string* kind_label) {
  Rng rng(seed);
  const Index kind = (n >= 2) ? rng.uniform_index(3) : 0;
  if (kind == 1) {
    if (kind_label) *kind_label = "derogatory";
    // Diagonalizable with a forced repeated eigenvalue.
    Rng inner(derive_seed(seed, 1));
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    d(0, 0) = d(1, 1) = Complex(1.0, -1.0);
    for (Index i = 2; i < n; ++i) d(i, i) = Complex(double(i), double(i % 3));
    const ComplexMatrix u = random_unitary(n, inner);
    const ComplexMatrix v = random_unitary(n, inner);
    Eigen::VectorXd sigma(n);
    for (Index i = 0; i < n; ++i) sigma(i) = std::pow(10.0, inner.uniform() - 0.5);
    return (u * sigma.asDiagonal() * v.adjoint()) * d * (v * sigma.cwiseInverse().asDiagonal() * u.adjoint());
  }
  if (kind == 2) {
    if (kind_label) *kind_label = "nilpotent";
    Rng inner(derive_seed(seed, 2));
    ComplexMatrix nil = ComplexMatrix::Zero(n, n);
    Index offset = 0;
    while (offset < n) {
      const Index block = 1 + inner.uniform_index(std::min<Index>(3, n - offset));
      const double gamma = 0.5 + 1.5 * inner.uniform();
      for (Index i = 0; i + 1 < block; ++i) nil(offset + i + 1, offset + i) = gamma;
      offset += block;
    }
    const ComplexMatrix u = random_unitary(n, inner);
    const ComplexMatrix v = random_unitary(n, inner);
    Eigen::VectorXd sigma(n);
    for (Index i = 0; i < n; ++i) sigma(i) = std::pow(10.0, inner.uniform() - 0.5);
    return (u * sigma.asDiagonal() * v.adjoint()) * nil * (v * sigma.cwiseInverse().asDiagonal() * u.adjoint());
  }
  if (kind_label) *kind_label = "generic";
  return Rng(derive_seed(seed, 0)).gaussian_matrix(n);
}

namespace detail {

struct WorkItem {
  Index index = 0;
  std::string label;
  Index n = 0;
  std::optional<std::uint64_t> seed;
  int k = 1;
  int l = 1;
  std::string assertion = "none";
  Index file_slot = -1;  // explicit_files: index into the preloaded matrices
};

inline std::vector<WorkItem> plan_batch(const BatchConfig& config, std::size_t num_files) {
  std::vector<WorkItem> items;
  const auto push_grid = [&](Index n, std::optional<std::uint64_t> seed, const std::string& label,
                             Index file_slot) {
    for (const auto& [k, l] : config.kl_grid) {
      WorkItem item;
      item.index = static_cast<Index>(items.size());
      item.label = label;
      item.n = n;
      item.seed = seed;
      item.k = k;
      item.l = l;
      item.file_slot = file_slot;
      if (k <= l) {
        switch (config.family) {
          case BatchConfig::Family::random_type_m:
            // Below the theorem threshold the paper asserts nothing; those
            // rows stay exploratory.
            item.assertion = (l >= 2 * config.m + 1) ? "is_smiley" : "none";
            break;
          case BatchConfig::Family::random_normal:
            item.assertion = "is_smiley";
            break;
          default:
            item.assertion = "is_proper";  // classical Smiley at finite dimension
            break;
        }
      }
      items.push_back(std::move(item));
    }
  };

  switch (config.family) {
    case BatchConfig::Family::explicit_files:
      for (std::size_t f = 0; f < num_files; ++f) {
        push_grid(0, std::nullopt, "file:" + config.files[f], static_cast<Index>(f));
      }
      break;
    case BatchConfig::Family::shift_truncation:
      for (Index n : config.sizes) push_grid(n, std::nullopt, "shift n=" + std::to_string(n), -1);
      break;
    default:
      for (Index n : config.sizes) {
        for (std::uint64_t seed : config.seeds) {
          push_grid(n, seed,
                    std::string(family_name(config.family)) + " n=" + std::to_string(n) +
                        " seed=" + std::to_string(seed),
                    -1);
        }
      }
      break;
  }
  return items;
}

}  // namespace detail

/// Runs the configured experiment grid. Items are independent and may be
/// processed by several workers; records land in instance-index order so
/// the report is identical for any thread count. Per-instance failures are
/// recorded, never fatal.
inline ExperimentReport batch_run(const BatchConfig& config,
                                  const std::vector<ComplexMatrix>& explicit_matrices = {}) {
  config.validate();
  if (config.family == BatchConfig::Family::explicit_files &&
      explicit_matrices.size() != config.files.size()) {
    throw InputError("batch_run: expected one preloaded matrix per configured file");
  }

  ExperimentReport report;
  report.config = config;

  const std::vector<detail::WorkItem> items = detail::plan_batch(config, explicit_matrices.size());
  report.instances.resize(items.size());

  const auto process = [&](const detail::WorkItem& item) {
    InstanceRecord record;
    record.index = item.index;
    record.label = item.label;
    record.n = item.n;
    record.k = item.k;
    record.l = item.l;
    record.seed = item.seed;
    record.assertion = item.assertion;
    try {
      ComplexMatrix a;
      switch (config.family) {
        case BatchConfig::Family::explicit_files:
          a = explicit_matrices[static_cast<std::size_t>(item.file_slot)];
          record.n = a.rows();
          break;
        case BatchConfig::Family::random_generic: {
          std::string kind;
          a = random_mixed_instance(item.n, *item.seed, &kind);
          record.label += " kind=" + kind;
          break;
        }
        case BatchConfig::Family::random_normal:
          a = random_normal(item.n, *item.seed);
          break;
        case BatchConfig::Family::random_type_m:
          a = random_spectral_of_type(item.n, config.m, *item.seed, config.cond_bound).matrix;
          break;
        case BatchConfig::Family::shift_truncation: {
          a = ComplexMatrix::Zero(item.n, item.n);
          for (Index i = 0; i + 1 < item.n; ++i) a(i + 1, i) = 1.0;
          break;
        }
      }
      SmileyCertificate cert = certify_smiley(a, item.k, item.l, config.tolerances);
      cert.seed = item.seed;
      if (record.assertion == "is_smiley") {
        record.asserted_pass = cert.is_smiley;
      } else if (record.assertion == "is_proper") {
        record.asserted_pass = cert.is_proper;
      }
      record.certificate = std::move(cert);
    } catch (const std::exception& e) {
      record.error = e.what();
      record.asserted_pass = record.assertion == "none";
    }
    report.instances[static_cast<std::size_t>(item.index)] = std::move(record);
  };

  const int workers = std::min<int>(config.threads, static_cast<int>(std::max<std::size_t>(items.size(), 1)));
  if (workers <= 1) {
    for (const auto& item : items) process(item);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = cursor.fetch_add(1); i < items.size(); i = cursor.fetch_add(1)) {
          process(items[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& record : report.instances) {
    ++report.aggregate.instances;
    if (record.certificate) {
      ++report.aggregate.certificates;
      if (record.certificate->is_smiley) ++report.aggregate.smiley_true;
      if (record.certificate->is_proper) ++report.aggregate.proper_true;
    }
    if (record.assertion != "none") {
      ++report.aggregate.asserted;
      if (!record.asserted_pass) ++report.aggregate.asserted_failures;
    }
    if (!record.error.empty()) ++report.aggregate.errors;
  }
  return report;
}

}  // namespace centralab
