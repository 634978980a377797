#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pfb/benchmark_runner.hpp"

namespace pfb {

struct SolverSettings {
  double picard_tolerance = 1e-9;
  int max_picard_iterations = 50;
  double picard_relaxation = 1.0;
  std::optional<double> steady_tolerance;  ///< replaces the spec's value when set
};

/// Run configuration. Either a builtin benchmark name (with an optional JSON
/// merge patch applied to its serialized spec) or a complete spec:
///
///   {"benchmark": "multilayer", "overrides": {"transport": {"dt": 0.02}},
///    "formulation": "vms", "output_dir": "out", "output_interval": 10,
///    "solver": {"picard_tolerance": 1e-9}}
struct RunConfig {
  BenchmarkSpec spec;
  std::string benchmark;  ///< empty for a custom spec
  nlohmann::json overrides = nlohmann::json::object();
  Formulation formulation = Formulation::rt0;
  std::string output_dir;  ///< empty: PFB_OUTPUT_DIR, then "pfb_output"
  std::optional<int> output_interval;
  SolverSettings solver;
};

/// Strict reader; every error is a ConfigError with a JSON pointer.
RunConfig config_from_json(const nlohmann::json& j);
/// Reads and validates a config file. Malformed JSON is reported at path "".
RunConfig parse_config(const std::string& path);

/// Resolved config (the spec expanded, overrides already applied) as
/// sorted-key JSON text.
std::string format_config(const RunConfig& config);

/// Spec with output interval and solver overrides applied.
BenchmarkSpec effective_spec(const RunConfig& config);
RunOptions run_options(const RunConfig& config);

/// Output root from the config, else PFB_OUTPUT_DIR, else "pfb_output".
std::string output_root(const std::string& configured);

}  // namespace pfb
