#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

#include <centralab/matrix_io.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace centralab;

namespace {

const ToleranceConfig tol;

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& contents = "") {
    path = std::filesystem::temp_directory_path() / name;
    if (!contents.empty()) {
      std::ofstream out(path);
      out << contents;
    }
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

// Structural validation against the subset of JSON Schema the shipped
// schema uses: type, required, properties, items, enum, $ref into
// definitions.
bool schema_valid(const json& schema, const json& value, const json& root);

bool type_matches(const std::string& type, const json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  return false;
}

bool schema_valid(const json& schema, const json& value, const json& root) {
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    REQUIRE(ref.rfind(prefix, 0) == 0);
    return schema_valid(root["definitions"][ref.substr(prefix.size())], value, root);
  }
  if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value)) return false;
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& option : schema["enum"]) hit = hit || option == value;
    if (!hit) return false;
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) return false;
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (value.contains(key) && !schema_valid(sub, value[key], root)) return false;
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (const auto& item : value) {
      if (!schema_valid(schema["items"], item, root)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("parse_matrix on well-formed files") {
  TempFile j2("centralab_j2.json", R"({"n":2,"re":[[0,0],[1,0]],"im":[[0,0],[0,0]]})");
  const ComplexMatrix parsed = parse_matrix(j2.path.string());
  REQUIRE(parsed.rows() == 2);
  CHECK(parsed(1, 0) == Complex(1.0, 0.0));
  CHECK(parsed(0, 1) == Complex(0.0, 0.0));

  TempFile scalar("centralab_scalar.json", R"({"n":1,"re":[[5]],"im":[[0]]})");
  const ComplexMatrix five = parse_matrix(scalar.path.string());
  REQUIRE(five.rows() == 1);
  CHECK(five(0, 0) == Complex(5.0, 0.0));
}

TEST_CASE("parse_matrix error cases are distinct") {
  CHECK_THROWS_WITH(parse_matrix("/nonexistent/m.json"), Catch::Matchers::ContainsSubstring("not found"));

  TempFile garbage("centralab_garbage.json", "{not json");
  CHECK_THROWS_WITH(parse_matrix(garbage.path.string()), Catch::Matchers::ContainsSubstring("invalid JSON"));

  TempFile schema("centralab_schema.json", R"({"n":2,"re":[[1,0],[0,1]]})");
  CHECK_THROWS_WITH(parse_matrix(schema.path.string()), Catch::Matchers::ContainsSubstring("expected {n, re, im}"));

  TempFile ragged("centralab_ragged.json", R"({"n":2,"re":[[0]],"im":[[0,0],[0,0]]})");
  CHECK_THROWS_WITH(parse_matrix(ragged.path.string()), Catch::Matchers::ContainsSubstring("ragged"));

  TempFile inf("centralab_inf.json", R"({"n":1,"re":[[1e999]],"im":[[0]]})");
  CHECK_THROWS_WITH(parse_matrix(inf.path.string()), Catch::Matchers::ContainsSubstring("non-finite"));
}

TEST_CASE("matrix write/parse round trip is bit exact") {
  Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix a = rng.gaussian_matrix(3);
    a(0, 0) = Complex(1.0 / 3.0, -2.0e-17);
    a(1, 2) = Complex(1e300, 5e-300);
    TempFile file("centralab_roundtrip_" + std::to_string(trial) + ".json");
    write_matrix(a, file.path.string());
    const ComplexMatrix back = parse_matrix(file.path.string());
    REQUIRE(back.rows() == a.rows());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) {
        CHECK(back(i, j).real() == a(i, j).real());
        CHECK(back(i, j).imag() == a(i, j).imag());
      }
  }
}

TEST_CASE("canonical_json is stable and key-sorted") {
  json doc;
  doc["zeta"] = 1.5;
  doc["alpha"] = json::array({1, 2, 3});
  doc["mid"] = json{{"b", true}, {"a", "x"}};
  const std::string first = canonical_json(doc);
  const std::string second = canonical_json(doc);
  CHECK(first == second);
  CHECK(first.find("\"alpha\"") < first.find("\"mid\""));
  CHECK(first.find("\"mid\"") < first.find("\"zeta\""));
  CHECK(first.find("\"a\"") < first.find("\"b\""));
}

TEST_CASE("matrix digest is deterministic and content sensitive") {
  Rng rng(93);
  const ComplexMatrix a = rng.gaussian_matrix(3);
  CHECK(matrix_digest(a) == matrix_digest(a));
  ComplexMatrix b = a;
  b(2, 2) += 1e-13;
  CHECK(matrix_digest(a) != matrix_digest(b));
  CHECK(matrix_digest(a).rfind("fnv1a:", 0) == 0);
}

TEST_CASE("batch config parsing and validation") {
  TempFile good("centralab_cfg.json", R"({
    "family": "random-type-m",
    "sizes": [3, 4],
    "m": 1,
    "kl_grid": [[1, 1], [3, 3]],
    "seeds": [1, 2],
    "tolerances": {"cluster_tol": 1e-4}
  })");
  const BatchConfig config = parse_batch_config(good.path.string());
  CHECK(config.family == BatchConfig::Family::random_type_m);
  CHECK(config.sizes == std::vector<Index>{3, 4});
  CHECK(config.m == 1);
  CHECK(config.kl_grid.size() == 2);
  CHECK(config.tolerances.cluster_tol == 1e-4);
  CHECK(config.tolerances.rank_rel_tol == 1e-10);  // default preserved

  TempFile bad_family("centralab_cfg_bad.json", R"({"family": "interdimensional", "kl_grid": [[1,1]], "sizes": [2]})");
  CHECK_THROWS_WITH(parse_batch_config(bad_family.path.string()),
                    Catch::Matchers::ContainsSubstring("unknown batch family"));

  TempFile bad_m("centralab_cfg_badm.json",
                 R"({"family": "random-type-m", "sizes": [2], "m": 2, "kl_grid": [[1,1]], "seeds": [1]})");
  CHECK_THROWS_WITH(parse_batch_config(bad_m.path.string()), Catch::Matchers::ContainsSubstring("n >= m + 1"));
}

TEST_CASE("reports serialize identically and validate against the schema") {
  BatchConfig config;
  config.family = BatchConfig::Family::shift_truncation;
  config.sizes = {4};
  config.kl_grid = {{2, 2}};

  const ExperimentReport report = batch_run(config);
  REQUIRE(report.instances.size() == 1);
  REQUIRE(report.instances[0].certificate.has_value());

  const std::string once = canonical_json(report_to_json(report));
  const std::string again = canonical_json(report_to_json(batch_run(config)));
  CHECK(once == again);

  std::ifstream schema_in(CENTRALAB_SCHEMA_PATH);
  REQUIRE(schema_in.good());
  const json schema = json::parse(schema_in);
  const json doc = json::parse(once);
  CHECK(schema_valid(schema, doc, schema));

  // The deterministic placeholder keeps wall time out of the bytes.
  CHECK(doc["runtime_ms"].get<double>() == 0.0);
}

TEST_CASE("emit_report writes the canonical bytes") {
  BatchConfig config;
  config.family = BatchConfig::Family::explicit_files;
  config.kl_grid = {{1, 1}};

  const ExperimentReport report = batch_run(config);
  TempFile file("centralab_report.json");
  emit_report(report, file.path.string());
  std::ifstream in(file.path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == canonical_json(report_to_json(report)));
  CHECK(json::parse(buffer.str())["aggregate"]["instances"].get<int>() == 0);
}
