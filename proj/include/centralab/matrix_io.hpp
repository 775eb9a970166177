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
#include <centralab/decomposition.hpp>
#include <centralab/shift_lab.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace centralab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical JSON: object keys sorted (nlohmann's default map order), arrays
// kept in place, floats with 17 significant digits so doubles round-trip
// bit-exactly and identical values serialize to identical bytes.

namespace detail {

inline void canonical_emit(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw InputError("canonical_json: non-finite number");
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", d);
      out += buf;
      break;
    }
    case json::value_t::string:
      out += json(v.get<std::string>()).dump();
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        canonical_emit(item, out);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        canonical_emit(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      throw InputError("canonical_json: unsupported value type");
  }
}

}  // namespace detail

inline std::string canonical_json(const json& v) {
  std::string out;
  detail::canonical_emit(v, out);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Matrix files: {"n": dim, "re": n x n, "im": n x n}.

inline json matrix_to_json(const ComplexMatrix& a) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (Index j = 0; j < a.cols(); ++j) {
      re_row.push_back(a(i, j).real());
      im_row.push_back(a(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"n", a.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("re") || !doc.contains("im") ||
      !doc["n"].is_number_integer() || doc["n"].get<std::int64_t>() < 1) {
    throw InputError("malformed matrix file (expected {n, re, im} with positive integer n): " + origin);
  }
  const Index n = doc["n"].get<Index>();
  const auto read_plane = [&](const char* key, bool imag, ComplexMatrix& target) {
    const json& plane = doc[key];
    if (!plane.is_array() || static_cast<Index>(plane.size()) != n) {
      throw InputError(std::string("ragged matrix arrays (") + key + " is not n rows): " + origin);
    }
    for (Index i = 0; i < n; ++i) {
      const json& row = plane[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n) {
        throw InputError(std::string("ragged matrix arrays (") + key + " row " + std::to_string(i) +
                         " is not n entries): " + origin);
      }
      for (Index j = 0; j < n; ++j) {
        const json& cell = row[static_cast<std::size_t>(j)];
        if (!cell.is_number()) {
          throw InputError(std::string("malformed matrix file (non-numeric entry in ") + key + "): " + origin);
        }
        const double value = cell.get<double>();
        if (!std::isfinite(value)) {
          throw InputError("non-finite matrix entries: " + origin);
        }
        if (imag) {
          target(i, j) += Complex(0.0, value);
        } else {
          target(i, j) += Complex(value, 0.0);
        }
      }
    }
  };
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  read_plane("re", false, out);
  read_plane("im", true, out);
  return out;
}

inline ComplexMatrix parse_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("matrix file not found: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw InputError("malformed matrix file (invalid JSON): " + path);
  return matrix_from_json(doc, path);
}

inline void write_matrix(const ComplexMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write matrix file: " + path);
  out << canonical_json(matrix_to_json(a));
  if (!out) throw InputError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Configuration and report serialization.

inline json tolerances_to_json(const ToleranceConfig& tol) {
  return json{{"rank_rel_tol", tol.rank_rel_tol},
              {"containment_tol", tol.containment_tol},
              {"zero_tol", tol.zero_tol},
              {"cluster_tol", tol.cluster_tol}};
}

inline ToleranceConfig tolerances_from_json(const json& doc) {
  ToleranceConfig tol;
  if (doc.contains("rank_rel_tol")) tol.rank_rel_tol = doc["rank_rel_tol"].get<double>();
  if (doc.contains("containment_tol")) tol.containment_tol = doc["containment_tol"].get<double>();
  if (doc.contains("zero_tol")) tol.zero_tol = doc["zero_tol"].get<double>();
  if (doc.contains("cluster_tol")) tol.cluster_tol = doc["cluster_tol"].get<double>();
  tol.validate();
  return tol;
}

inline BatchConfig::Family family_from_name(const std::string& name) {
  if (name == "explicit-files") return BatchConfig::Family::explicit_files;
  if (name == "random-generic") return BatchConfig::Family::random_generic;
  if (name == "random-normal") return BatchConfig::Family::random_normal;
  if (name == "random-type-m") return BatchConfig::Family::random_type_m;
  if (name == "shift-truncation") return BatchConfig::Family::shift_truncation;
  throw InputError("unknown batch family: " + name);
}

inline BatchConfig batch_config_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("family")) {
    throw InputError("batch config must be an object with a family field");
  }
  BatchConfig config;
  config.family = family_from_name(doc["family"].get<std::string>());
  if (doc.contains("sizes")) config.sizes = doc["sizes"].get<std::vector<Index>>();
  if (doc.contains("m")) config.m = doc["m"].get<int>();
  if (doc.contains("kl_grid")) {
    for (const auto& pair : doc["kl_grid"]) {
      if (!pair.is_array() || pair.size() != 2) throw InputError("kl_grid entries must be [k, l] pairs");
      config.kl_grid.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  }
  if (doc.contains("seeds")) config.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
  if (doc.contains("tolerances")) config.tolerances = tolerances_from_json(doc["tolerances"]);
  if (doc.contains("output_path")) config.output_path = doc["output_path"].get<std::string>();
  if (doc.contains("files")) config.files = doc["files"].get<std::vector<std::string>>();
  if (doc.contains("cond_bound")) config.cond_bound = doc["cond_bound"].get<double>();
  config.validate();
  return config;
}

inline BatchConfig parse_batch_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("batch config not found: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw InputError("malformed batch config (invalid JSON): " + path);
  return batch_config_from_json(doc);
}

/// Config echo inside reports. Execution parameters (threads, output path)
/// are delivery details, not experiment identity, and are left out so that
/// reruns with different scheduling stay byte-identical.
inline json batch_config_to_json(const BatchConfig& config) {
  json out{{"family", family_name(config.family)},
           {"kl_grid", json::array()},
           {"tolerances", tolerances_to_json(config.tolerances)}};
  for (const auto& [k, l] : config.kl_grid) out["kl_grid"].push_back(json::array({k, l}));
  if (!config.sizes.empty()) out["sizes"] = config.sizes;
  if (config.m >= 0) out["m"] = config.m;
  if (!config.seeds.empty()) out["seeds"] = config.seeds;
  if (!config.files.empty()) out["files"] = config.files;
  if (config.family == BatchConfig::Family::random_type_m) out["cond_bound"] = config.cond_bound;
  return out;
}

inline json certificate_to_json(const SmileyCertificate& cert) {
  json out{{"k", cert.k},
           {"l", cert.l},
           {"digest", cert.input_digest},
           {"dims", json{{"cl", cert.dim_cl}, {"ckcl", cert.dim_ckcl}, {"pol", cert.dim_pol}, {"vn", cert.dim_vn}}},
           {"residuals", json{{"vn", cert.residual_vn}, {"pol", cert.residual_pol}}},
           {"verdicts", json{{"is_smiley", cert.is_smiley}, {"is_proper", cert.is_proper}}},
           {"warnings", cert.warnings},
           {"tolerances", tolerances_to_json(cert.tol)}};
  if (cert.seed) out["seed"] = *cert.seed;
  return out;
}

inline json report_to_json(const ExperimentReport& report) {
  json instances = json::array();
  for (const auto& record : report.instances) {
    json row{{"index", record.index},
             {"label", record.label},
             {"n", record.n},
             {"k", record.k},
             {"l", record.l},
             {"assertion", record.assertion},
             {"asserted_pass", record.asserted_pass}};
    if (record.seed) row["seed"] = *record.seed;
    if (record.certificate) {
      const json cert = certificate_to_json(*record.certificate);
      row["digest"] = cert["digest"];
      row["dims"] = cert["dims"];
      row["residuals"] = cert["residuals"];
      row["verdicts"] = cert["verdicts"];
      row["warnings"] = cert["warnings"];
    }
    if (!record.error.empty()) row["error"] = record.error;
    instances.push_back(std::move(row));
  }
  return json{{"version", report.version},
              {"config", batch_config_to_json(report.config)},
              {"tolerances", tolerances_to_json(report.config.tolerances)},
              {"instances", std::move(instances)},
              {"aggregate", json{{"instances", report.aggregate.instances},
                                 {"certificates", report.aggregate.certificates},
                                 {"smiley_true", report.aggregate.smiley_true},
                                 {"proper_true", report.aggregate.proper_true},
                                 {"asserted", report.aggregate.asserted},
                                 {"asserted_failures", report.aggregate.asserted_failures},
                                 {"errors", report.aggregate.errors}}},
              // Deterministic placeholder; wall time goes to stderr so the
              // file stays byte-reproducible.
              {"runtime_ms", 0.0}};
}

inline void emit_report(const ExperimentReport& report, std::ostream& out) {
  out << canonical_json(report_to_json(report));
  if (!out) throw InputError("report write failed");
}

inline void emit_report(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write report: " + path);
  emit_report(report, out);
}

// ---------------------------------------------------------------------------
// Serializers for the remaining CLI results.

inline json subspace_to_json(const OperatorSubspace& s, bool include_basis) {
  json out{{"n", s.ambient_dim}, {"dim", s.dim()}};
  if (include_basis) {
    json basis = json::array();
    for (Index i = 0; i < s.dim(); ++i) basis.push_back(matrix_to_json(s.basis_matrix(i)));
    out["basis"] = std::move(basis);
  }
  return out;
}

inline json decomposition_to_json(const CanonicalDecomposition& dec) {
  json eigs = json::array();
  for (const auto& comp : dec.components) {
    eigs.push_back(json{{"re", comp.eigenvalue.real()}, {"im", comp.eigenvalue.imag()}});
  }
  return json{{"type_m", dec.nilpotency_type},
              {"scalar_part", matrix_to_json(dec.scalar_part)},
              {"nilpotent_part", matrix_to_json(dec.nilpotent_part)},
              {"eigenvalues", std::move(eigs)},
              {"warnings", dec.warnings},
              {"invariants_ok", dec.invariants_ok}};
}

inline json shift_report_to_json(const ShiftStructureReport& report) {
  std::array<double, 3> family_worst{0.0, 0.0, 0.0};
  for (const auto& cond : report.interior) {
    auto& slot = family_worst[static_cast<std::size_t>(cond.family - 1)];
    slot = std::max(slot, cond.residual);
  }
  return json{{"n", report.n},
              {"dim_c2", report.dim_c2},
              {"interior_conditions", report.interior.size()},
              {"max_interior_residual", report.max_interior_residual},
              {"family_residuals", family_worst},
              {"interior_ok", report.interior_ok}};
}

}  // namespace centralab
