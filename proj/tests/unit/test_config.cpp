#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfb/config.hpp"
#include "pfb/errors.hpp"

using namespace pfb;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(PFB_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_path(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("builtin specs round-trip through JSON") {
    for (const std::string& name : builtin_benchmark_names()) {
      CAPTURE(name);
      const BenchmarkSpec s = builtin_benchmark(name);
      const json j = to_json(s);
      const BenchmarkSpec back = spec_from_json(json::parse(j.dump()));
      CHECK(back == s);
      CHECK(to_json(back).dump() == j.dump());
    }
  }

  TEST_CASE("a misspelled key is named in the error") {
    try {
      parse_config(data("typo_config.json"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.path() == "/formulaton");
      CHECK(std::string(e.what()).find("formulaton") != std::string::npos);
    }
  }

  TEST_CASE("invalid values report their location") {
    CHECK(error_path({{"benchmark", "multilayer"}, {"overrides", {{"transport", {{"dt", -1.0}}}}}}) ==
          "/overrides/transport/dt");
    CHECK(error_path({{"benchmark", "nope"}}) == "/benchmark");
    CHECK(error_path({{"benchmark", "multilayer"}, {"formulation", "dg"}}) == "/formulation");
    CHECK(error_path({{"benchmark", "multilayer"}, {"solver", {{"picard_relaxation", 1.5}}}}) ==
          "/solver/picard_relaxation");
    CHECK(error_path({{"benchmark", "multilayer"}, {"solver", {{"tolerance", 1e-9}}}}) ==
          "/solver/tolerance");
    CHECK(error_path(json::object()) == "/benchmark");
    CHECK(error_path({{"benchmark", "multilayer"}, {"output_interval", -3}}) == "/output_interval");
    CHECK(error_path({{"benchmark", "multilayer"}, {"output_interval", "often"}}) == "/output_interval");
  }

  TEST_CASE("malformed JSON is a config error at the root") {
    const std::string path = "pfb_test_malformed.json";
    std::ofstream(path) << "{\"benchmark\": ";
    try {
      parse_config(path);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.path().empty());
    }
    std::remove(path.c_str());
  }

  TEST_CASE("overrides and solver settings are applied") {
    const RunConfig c = parse_config(data("multilayer_config.json"));
    CHECK(c.benchmark == "multilayer");
    CHECK(c.formulation == Formulation::vms);
    CHECK(c.spec.transport.t_end == 1.0);
    CHECK(c.solver.picard_tolerance == 1e-10);
    CHECK(effective_spec(c).outputs.snapshot_every == 100);
    CHECK(run_options(c).flow.picard_tolerance == 1e-10);
    const BenchmarkSpec base = multilayer();
    CHECK(c.spec.transport.dt == base.transport.dt);
  }

  TEST_CASE("resolved config matches the golden file and is deterministic") {
    const std::string a = format_config(parse_config(data("multilayer_config.json")));
    const std::string b = format_config(parse_config(data("multilayer_config.json")));
    CHECK(a == b);
    CHECK(a == slurp(data("multilayer_resolved.json")));
    // The resolved form is itself a valid complete config.
    const RunConfig again = config_from_json(json::parse(a));
    CHECK(format_config(again) == a);
  }
}
