#include "pfb/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "pfb/errors.hpp"

namespace pfb {

using nlohmann::json;
using detail::ObjectReader;

namespace {

// Config errors inside a nested spec carry the path of the spec itself, so
// errors from the patched builtin are reported under /overrides.
BenchmarkSpec read_patched(const std::string& name, const json& overrides) {
  BenchmarkSpec base;
  try {
    base = builtin_benchmark(name);
  } catch (const InvalidArgument&) {
    throw ConfigError("/benchmark", "unknown benchmark '" + name + "'");
  }
  json merged = to_json(base);
  merged.merge_patch(overrides);
  return spec_from_json(merged, "/overrides");
}

}  // namespace

RunConfig config_from_json(const json& j) {
  ObjectReader r(j, "");
  RunConfig c;
  const json* bench = r.optional("benchmark");
  const json* spec = r.optional("spec");
  const json* overrides = r.optional("overrides");
  if (bench && spec) throw ConfigError("/spec", "give either 'benchmark' or 'spec', not both");
  if (!bench && !spec) throw ConfigError("/benchmark", "missing required field (or 'spec')");
  if (overrides) {
    if (!bench) throw ConfigError("/overrides", "overrides apply only to a builtin benchmark");
    if (!overrides->is_object()) {
      throw ConfigError("/overrides", std::string("expected an object, found ") + overrides->type_name());
    }
    c.overrides = *overrides;
  }
  if (bench) {
    c.benchmark = detail::as_string(*bench, "/benchmark");
    c.spec = read_patched(c.benchmark, c.overrides);
  } else {
    c.spec = spec_from_json(*spec, "/spec");
  }
  const std::string f = r.string("formulation", "rt0");
  try {
    c.formulation = parse_formulation(f);
  } catch (const InvalidArgument&) {
    throw ConfigError("/formulation", "unknown formulation '" + f + "' (expected rt0 or vms)");
  }
  c.output_dir = r.string("output_dir", "");
  if (r.has("output_interval")) {
    c.output_interval = r.integer("output_interval", 0);
    if (*c.output_interval < 0) throw ConfigError("/output_interval", "must be non-negative");
  }
  if (const json* s = r.optional("solver")) {
    ObjectReader sr(*s, "/solver");
    SolverSettings& o = c.solver;
    o.picard_tolerance = sr.number("picard_tolerance", o.picard_tolerance);
    if (!(o.picard_tolerance > 0.0)) throw ConfigError(sr.at("picard_tolerance"), "must be positive");
    o.max_picard_iterations = sr.integer("max_picard_iterations", o.max_picard_iterations);
    if (o.max_picard_iterations < 1) throw ConfigError(sr.at("max_picard_iterations"), "must be at least 1");
    o.picard_relaxation = sr.number("picard_relaxation", o.picard_relaxation);
    if (!(o.picard_relaxation > 0.0 && o.picard_relaxation <= 1.0)) {
      throw ConfigError(sr.at("picard_relaxation"), "must lie in (0, 1]");
    }
    if (sr.has("steady_tolerance")) {
      o.steady_tolerance = sr.number("steady_tolerance", 0.0);
      if (!(*o.steady_tolerance >= 0.0)) throw ConfigError(sr.at("steady_tolerance"), "must be non-negative");
    }
    sr.finish();
  }
  r.finish();
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string format_config(const RunConfig& c) {
  json j;
  j["spec"] = to_json(c.spec);
  j["formulation"] = std::string(to_string(c.formulation));
  j["output_dir"] = c.output_dir;
  if (c.output_interval) j["output_interval"] = *c.output_interval;
  json solver{{"picard_tolerance", c.solver.picard_tolerance},
              {"max_picard_iterations", c.solver.max_picard_iterations},
              {"picard_relaxation", c.solver.picard_relaxation}};
  if (c.solver.steady_tolerance) solver["steady_tolerance"] = *c.solver.steady_tolerance;
  j["solver"] = solver;
  return j.dump(2) + "\n";
}

BenchmarkSpec effective_spec(const RunConfig& c) {
  BenchmarkSpec s = c.spec;
  if (c.output_interval) s.outputs.snapshot_every = *c.output_interval;
  if (c.solver.steady_tolerance) s.transport.steady_tolerance = *c.solver.steady_tolerance;
  s.picard_relaxation = std::min(s.picard_relaxation, c.solver.picard_relaxation);
  return s;
}

RunOptions run_options(const RunConfig& c) {
  RunOptions o;
  o.flow.picard_tolerance = c.solver.picard_tolerance;
  o.flow.max_picard_iterations = c.solver.max_picard_iterations;
  o.flow.relaxation = c.solver.picard_relaxation;
  o.output_dir = output_root(c.output_dir) + "/" + c.spec.name + "_" + std::string(to_string(c.formulation));
  return o;
}

std::string output_root(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("PFB_OUTPUT_DIR"); env && *env) return env;
  return "pfb_output";
}

}  // namespace pfb
