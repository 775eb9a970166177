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

#include <centralab/centralab.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace centralab;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;      // usage, I/O or numerical-integrity error
constexpr int kExitAssertion = 2;  // a certification/containment assertion failed

void write_result(const json& doc, const std::string& output_path) {
  const std::string text = canonical_json(doc);
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw InputError("cannot write output: " + output_path);
    out << text;
    if (!out) throw InputError("write failed: " + output_path);
  }
}

double membership_residual(const OperatorSubspace& space, const ComplexMatrix& candidate) {
  const double norm = candidate.norm();
  if (norm == 0.0) return 0.0;
  const ComplexVector v = vectorize(candidate) / norm;
  return (v - space.vecs * (space.vecs.adjoint() * v)).norm();
}

struct GlobalOptions {
  ToleranceConfig tol;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: unset, fall back to CENTRALAB_THREADS, then 1
};

int resolve_threads(const GlobalOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  if (const char* env = std::getenv("CENTRALAB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

int run_centralizer(const std::string& input, int s, bool emit_basis, const GlobalOptions& opts) {
  const ComplexMatrix a = parse_matrix(input);
  const OperatorSubspace cs = centralizer(a, s, opts.tol);
  const double id_res = membership_residual(cs, ComplexMatrix::Identity(a.rows(), a.cols()));
  const double a_res = membership_residual(cs, a);
  json out = subspace_to_json(cs, emit_basis);
  out["command"] = "centralizer";
  out["s"] = s;
  out["digest"] = matrix_digest(a);
  out["identity_residual"] = id_res;
  out["input_residual"] = a_res;
  write_result(out, opts.output_path);
  const bool ok = id_res <= opts.tol.containment_tol && a_res <= opts.tol.containment_tol;
  return ok ? kExitOk : kExitAssertion;
}

int run_double(const std::string& input, int k, int l, bool emit_basis, const GlobalOptions& opts) {
  if (k < 1) throw InputError("k must be >= 1");
  if (l < 1) throw InputError("l must be >= 1");
  const ComplexMatrix a = parse_matrix(input);
  const OperatorSubspace cl = centralizer(a, l, opts.tol);
  const OperatorSubspace ckcl = symmetrized_ad_kernel(cl, k, opts.tol);
  const double id_res = membership_residual(ckcl, ComplexMatrix::Identity(a.rows(), a.cols()));
  json out = subspace_to_json(ckcl, emit_basis);
  out["command"] = "double";
  out["k"] = k;
  out["l"] = l;
  out["dim_cl"] = cl.dim();
  out["digest"] = matrix_digest(a);
  out["identity_residual"] = id_res;
  bool ok = id_res <= opts.tol.containment_tol;
  if (l == 1) {
    // Membership of A itself is only guaranteed when the inner exponent is
    // 1 (then every X in C_1(A) commutes with A outright).
    const double a_res = membership_residual(ckcl, a);
    out["input_residual"] = a_res;
    ok = ok && a_res <= opts.tol.containment_tol;
  }
  write_result(out, opts.output_path);
  return ok ? kExitOk : kExitAssertion;
}

int run_decompose(const std::string& input, const GlobalOptions& opts) {
  const ComplexMatrix a = parse_matrix(input);
  const CanonicalDecomposition dec = jordan_chevalley(a, opts.tol);
  json out = decomposition_to_json(dec);
  out["command"] = "decompose";
  out["n"] = a.rows();
  out["digest"] = matrix_digest(a);
  out["reconstruction_residual"] = (a - dec.scalar_part - dec.nilpotent_part).norm();
  write_result(out, opts.output_path);
  return dec.invariants_ok ? kExitOk : kExitAssertion;
}

int run_hulls(const std::string& input, bool emit_basis, const GlobalOptions& opts) {
  const ComplexMatrix a = parse_matrix(input);
  const OperatorSubspace pol = pol_hull(a, opts.tol);
  const OperatorSubspace vn = vn_hull(a, opts.tol);
  const ContainmentResult pol_in_vn = subspace_contains(vn, pol, opts.tol);
  json out{{"command", "hulls"},
           {"n", a.rows()},
           {"digest", matrix_digest(a)},
           {"pol", subspace_to_json(pol, emit_basis)},
           {"vn", subspace_to_json(vn, emit_basis)},
           {"pol_in_vn_residual", pol_in_vn.residual}};
  write_result(out, opts.output_path);
  return pol_in_vn.contained ? kExitOk : kExitAssertion;
}

int run_certify(const std::string& input, int k, int l, const GlobalOptions& opts) {
  const ComplexMatrix a = parse_matrix(input);
  SmileyCertificate cert = certify_smiley(a, k, l, opts.tol);
  cert.seed = opts.seed;
  json out = certificate_to_json(cert);
  out["command"] = "certify";
  write_result(out, opts.output_path);
  return cert.is_smiley ? kExitOk : kExitAssertion;
}

int run_shift(Index n, std::optional<int> k, std::optional<int> l, const GlobalOptions& opts) {
  const ComplexMatrix j = shift_truncation(n);
  json out{{"command", "shift"},
           {"n", n},
           {"matrix", matrix_to_json(j)},
           {"nilpotency_order", nilpotency_order(j, opts.tol)},
           {"dim_c1", centralizer(j, 1, opts.tol).dim()},
           {"dim_c2", centralizer(j, 2, opts.tol).dim()}};
  bool ok = true;
  if (n >= 4) {
    const bool progression = diag_progression_check(n, opts.tol);
    out["diag_progression_ok"] = progression;
    ok = ok && progression;
  }
  if (n >= 6) {
    const ShiftStructureReport structure = c2_structure_check(n, opts.tol);
    out["structure"] = shift_report_to_json(structure);
    ok = ok && structure.interior_ok;
  }
  if (k && l) {
    SmileyCertificate cert = truncated_smiley(n, *k, *l, opts.tol);
    cert.seed = opts.seed;
    out["certificate"] = certificate_to_json(cert);
    ok = ok && cert.is_proper;
  } else if (k || l) {
    throw InputError("shift: --k and --l must be given together");
  }
  write_result(out, opts.output_path);
  return ok ? kExitOk : kExitAssertion;
}

int run_batch(const std::string& config_path, const GlobalOptions& opts) {
  BatchConfig config = parse_batch_config(config_path);
  config.threads = resolve_threads(opts);
  if (!opts.output_path.empty()) config.output_path = opts.output_path;

  std::vector<ComplexMatrix> preloaded;
  if (config.family == BatchConfig::Family::explicit_files) {
    preloaded.reserve(config.files.size());
    for (const auto& file : config.files) preloaded.push_back(parse_matrix(file));
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report = batch_run(config, preloaded);
  const auto stop = std::chrono::steady_clock::now();
  report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  std::cerr << "batch: " << report.aggregate.instances << " instances, "
            << report.aggregate.asserted_failures << " asserted failures, "
            << report.aggregate.errors << " errors, " << report.runtime_ms << " ms\n";

  if (config.output_path.empty()) {
    emit_report(report, std::cout);
  } else {
    emit_report(report, config.output_path);
  }
  return report.aggregate.asserted_failures == 0 ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational operator theory at desk scale: centralizers, canonical S+N decompositions, polynomial and von Neumann hulls, Smiley-type containment certificates"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--tol-rank", opts.tol.rank_rel_tol, "relative singular-value cutoff for rank decisions");
  app.add_option("--tol-contain", opts.tol.containment_tol, "max residual for subspace containment");
  app.add_option("--tol-zero", opts.tol.zero_tol, "norm threshold for treating an operator as zero");
  app.add_option("--tol-cluster", opts.tol.cluster_tol, "eigenvalue clustering radius");
  std::int64_t seed_flag = -1;
  app.add_option("--seed", seed_flag, "seed echoed into emitted certificates");
  app.add_option("--threads", opts.threads, "worker threads for batch runs (fallback: CENTRALAB_THREADS)");
  app.add_option("--output", opts.output_path, "write the JSON result here instead of stdout");

  std::string input_path, config_path;
  int s = 1, k = 1, l = 1;
  Index shift_n = 6;
  bool emit_basis = false;

  auto* cmd_centralizer = app.add_subcommand("centralizer", "s-centralizer C_s(A) of a matrix");
  cmd_centralizer->add_option("--input", input_path, "matrix file")->required();
  cmd_centralizer->add_option("--s", s, "ad power")->required();
  cmd_centralizer->add_flag("--emit-basis", emit_basis, "include the basis matrices in the output");

  auto* cmd_double = app.add_subcommand("double", "double centralizer C_k(C_l(A))");
  cmd_double->add_option("--input", input_path, "matrix file")->required();
  cmd_double->add_option("--k", k, "outer ad power")->required();
  cmd_double->add_option("--l", l, "inner ad power")->required();
  cmd_double->add_flag("--emit-basis", emit_basis, "include the basis matrices in the output");

  auto* cmd_decompose = app.add_subcommand("decompose", "canonical decomposition A = S + N");
  cmd_decompose->add_option("--input", input_path, "matrix file")->required();

  auto* cmd_hulls = app.add_subcommand("hulls", "polynomial hull and von Neumann hull of A");
  cmd_hulls->add_option("--input", input_path, "matrix file")->required();
  cmd_hulls->add_flag("--emit-basis", emit_basis, "include the basis matrices in the output");

  auto* cmd_certify = app.add_subcommand("certify", "Smiley containment certificate for (A, k, l)");
  cmd_certify->add_option("--input", input_path, "matrix file")->required();
  cmd_certify->add_option("--k", k, "outer ad power")->required();
  cmd_certify->add_option("--l", l, "inner ad power")->required();

  auto* cmd_shift = app.add_subcommand("shift", "truncated unilateral-shift structure report");
  cmd_shift->add_option("--n", shift_n, "truncation dimension (>= 2)")->required();
  auto* shift_k = cmd_shift->add_option("--k", k, "outer ad power for a certificate");
  auto* shift_l = cmd_shift->add_option("--l", l, "inner ad power for a certificate");

  auto* cmd_batch = app.add_subcommand("batch", "run a configured experiment batch");
  cmd_batch->add_option("--config", config_path, "batch config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (seed_flag >= 0) opts.seed = static_cast<std::uint64_t>(seed_flag);

  try {
    opts.tol.validate();
    if (cmd_centralizer->parsed()) {
      if (s < 1) throw InputError("s must be >= 1");
      return run_centralizer(input_path, s, emit_basis, opts);
    }
    if (cmd_double->parsed()) return run_double(input_path, k, l, emit_basis, opts);
    if (cmd_decompose->parsed()) return run_decompose(input_path, opts);
    if (cmd_hulls->parsed()) return run_hulls(input_path, emit_basis, opts);
    if (cmd_certify->parsed()) {
      if (k < 1) throw InputError("k must be >= 1");
      if (l < 1) throw InputError("l must be >= 1");
      return run_certify(input_path, k, l, opts);
    }
    if (cmd_shift->parsed()) {
      std::optional<int> kk, ll;
      if (shift_k->count() > 0) kk = k;
      if (shift_l->count() > 0) ll = l;
      return run_shift(shift_n, kk, ll, opts);
    }
    if (cmd_batch->parsed()) return run_batch(config_path, opts);
    std::cerr << "no subcommand selected\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
}
