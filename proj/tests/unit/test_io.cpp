#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "irid/error.hpp"
#include "irid/io.hpp"
#include "irid/oracle.hpp"
#include "irid/solver.hpp"
#include "support/wildcatter.hpp"

using namespace irid;
using namespace irid::testing;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json wildcatter_json() { return json::parse(read_file(model_path("wildcatter_irid.json"))); }

/// Temporary file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& text, const std::string& name = "model.json") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("irid_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + name);
    std::ofstream(path_, std::ios::binary) << text;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("every bundled model parses and validates") {
  for (const auto& entry : std::filesystem::directory_iterator(IRID_MODELS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_model(entry.path()));
  }
}

TEST_CASE("serialization round-trips") {
  const IridModel m = wildcatter();
  const std::string text = serialize_model(m);
  CHECK(parse_model(text) == m);
  CHECK(serialize_model(parse_model(text)) == text);
  CHECK(model_hash(m) == model_hash(parse_model(text)));
  CHECK(model_hash(m).size() == 16);
  CHECK(model_hash(m) != model_hash(load_bundled("wildcatter_no_budget.json")));
}

TEST_CASE("key order in the input does not matter") {
  json doc = wildcatter_json();
  json reordered = json::object();
  for (auto it = doc.rbegin(); it != doc.rend(); ++it) reordered[it.key()] = it.value();
  CHECK(parse_model(reordered.dump()) == wildcatter());
}

TEST_CASE("an unnormalized row is reported with its path") {
  json doc = wildcatter_json();
  doc["cpts"][2]["rows"][3]["p"]["o"] = 0.5;
  try {
    parse_model(doc.dump());
    FAIL("expected CptRowNotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CptRowNotNormalized);
    CHECK(e.issues().front().path == "cpts[2].rows[3]");
  }
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_model("{\n  \"schema_version\": \"1.0\",\n  \"nodes\": [,]\n}");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(e.issues().front().path == "line 3, column 13");
  }
}

TEST_CASE("schema errors name the field") {
  json doc = wildcatter_json();
  doc["nodes"][0]["kind"] = "random";
  try {
    parse_model(doc.dump());
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
    CHECK(e.issues().front().path == "$.nodes[0].kind");
  }

  json no_version = wildcatter_json();
  no_version.erase("schema_version");
  CHECK(code_of([&] { parse_model(no_version.dump()); }) == ErrorCode::SchemaError);

  json future = wildcatter_json();
  future["schema_version"] = "2.0";
  CHECK(code_of([&] { parse_model(future.dump()); }) == ErrorCode::SchemaError);

  json extra_given = wildcatter_json();
  extra_given["cpts"][0]["rows"][0]["given"]["O"] = "w";
  CHECK(code_of([&] { parse_model(extra_given.dump()); }) == ErrorCode::SchemaError);

  json not_number = wildcatter_json();
  not_number["value"]["cells"][0]["v"] = "a lot";
  CHECK(code_of([&] { parse_model(not_number.dump()); }) == ErrorCode::SchemaError);

  CHECK(code_of([&] { parse_model("[]"); }) == ErrorCode::SchemaError);
}

TEST_CASE("model errors pass through parsing") {
  json doc = wildcatter_json();
  doc["arrows"].push_back({{"from", "V"}, {"to", "B"}, {"kind", "relevance"}});
  CHECK(is_validation_error(code_of([&] { parse_model(doc.dump()); })));

  json bad_label = wildcatter_json();
  bad_label["cpts"][0]["rows"][0]["p"]["$3M"] = 0.0;
  CHECK(code_of([&] { parse_model(bad_label.dump()); }) == ErrorCode::SchemaError);

  CHECK(code_of([] { load_model("/nonexistent/model.json"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("solution documents") {
  const IridModel m = wildcatter();
  const Solution s = solve(m);
  const std::string text = serialize_solution(s, m);
  CHECK(text == serialize_solution(solve(m), m));

  const json doc = json::parse(text);
  CHECK(doc["schema_version"] == "1.0");
  CHECK(doc["model_hash"] == model_hash(m));
  CHECK(doc["backend"] == "exact");
  CHECK(doc["sampler"].is_null());
  CHECK(doc["expected_value"].get<double>() == doctest::Approx(334750.0));

  const json& d = doc["policies"][1];
  CHECK(d["decision"] == "D");
  bool found = false;
  for (const auto& cell : d["cells"]) {
    if (cell["given"] == json{{"B", "$1M"}, {"T", "t2"}, {"R", "c"}}) {
      CHECK(cell["choice"] == "nd");
      found = true;
    }
  }
  CHECK(found);

  // The reported expected value is the one of the reported policies.
  std::vector<Policy> policies;
  for (const auto& p : doc["policies"]) {
    const VarId dv = m.id(p["decision"].get<std::string>());
    std::map<std::string, std::string> choices;
    for (const auto& cell : p["cells"]) choices[cell["given"].dump()] = cell["choice"];
    policies.push_back(make_policy(m, dv, [&](const Assignment& config) {
      json given = json::object();
      for (VarId parent : m.parents(dv)) given[m.name(parent)] = m.frame(parent).label(config[parent]);
      return *m.frame(dv).index_of(choices.at(given.dump()));
    }));
  }
  CHECK(policies == s.policies);
  CHECK(exact_expectation(m, policies) == doctest::Approx(doc["expected_value"].get<double>()).epsilon(1e-6));

  SolveOptions g;
  g.backend = Backend::gibbs;
  g.sampler.samples = 500;
  g.sampler.burn_in = 50;
  const json gd = json::parse(serialize_solution(solve(m, g), m));
  CHECK(gd["sampler"]["seed"] == 1);
  CHECK(gd["expected_value_std_error"].get<double>() > 0.0);
}

TEST_CASE("fixed-point formatting") {
  CHECK(format_fixed(334750.0, 2) == "334750.00");
  CHECK(format_fixed(-0.001, 2) == "0.00");
  CHECK(format_fixed(-1.005e6, 0) == "-1005000");
}

TEST_CASE("policy tables") {
  const IridModel m = wildcatter();
  const std::string table = format_policy_table(solve(m), m);
  CHECK(table.find("policy T") != std::string::npos);
  CHECK(table.find("policy D") != std::string::npos);
  CHECK(table.find("expected value: 334750.00") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const std::string good = model_path("wildcatter_irid.json");

  SUBCASE("success") {
    const auto v = run({"validate", good});
    CHECK(v.code == 0);
    CHECK(v.out == "OK\n");
    const auto s = run({"solve", good});
    CHECK(s.code == 0);
    CHECK(s.out.find("expected value: 334750.00") != std::string::npos);
    CHECK(run({"oracle", good}).code == 0);
    CHECK(run({"compare", good, "--samples", "4000", "--burn-in", "200"}).code == 0);
  }

  SUBCASE("solution file") {
    TempFile out("", "solution.json");
    CHECK(run({"solve", good, "--out", out.str()}).code == 0);
    const IridModel m = wildcatter();
    CHECK(read_file(out.str()) == serialize_solution(solve(m), m));
  }

  SUBCASE("usage") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"solve"}).code == 1);
    CHECK(run({"solve", "/nonexistent/model.json"}).code == 1);
    CHECK(run({"solve", good, "--backend", "magic"}).code == 1);
    CHECK(run({"solve", good, "--samples", "0"}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  SUBCASE("validation") {
    json doc = wildcatter_json();
    doc["cpts"][2]["rows"][3]["p"]["o"] = 0.5;
    TempFile bad(doc.dump());
    const auto r = run({"solve", bad.str()});
    CHECK(r.code == 2);
    CHECK(r.err.find("error [CptRowNotNormalized] at cpts[2].rows[3]") != std::string::npos);
    TempFile broken("{ not json");
    CHECK(run({"validate", broken.str()}).code == 2);
  }

  SUBCASE("runtime") {
    const auto r = run({"oracle", good, "--max-combinations", "10"});
    CHECK(r.code == 3);
    CHECK(r.err.find("BudgetExceeded") != std::string::npos);
  }

  SUBCASE("disagreement") {
    // A two-sweep chain cannot tell close alternatives apart for every seed.
    bool disagreed = false;
    for (int seed = 1; seed <= 50 && !disagreed; ++seed) {
      const auto r = run({"compare", good, "--samples", "2", "--burn-in", "0", "--seed", std::to_string(seed)});
      REQUIRE((r.code == 0 || r.code == 4));
      if (r.code == 4) {
        disagreed = true;
        CHECK(r.out.find("policies differ") != std::string::npos);
      }
    }
    CHECK(disagreed);
  }
}
