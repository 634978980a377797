#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfb/benchmarks.hpp"
#include "pfb/diagnostics.hpp"
#include "pfb/flow_driver.hpp"

namespace pfb {

struct RunOptions {
  /// Directory for VTK, CSV and JSON outputs; nothing is written when empty.
  std::string output_dir;
  FlowSolveOptions flow;
  bool run_transport = true;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct BenchmarkRun {
  BenchmarkSpec spec;
  Formulation formulation = Formulation::rt0;
  std::shared_ptr<const Mesh> mesh;
  std::optional<FlowSolution> flow;
  MassBalanceReport balance;
  std::optional<TransientResult> transport;
  Series centerline;     ///< y, vx, expected vx (multilayer)
  Series leak;           ///< time, leak rate (leaky well)
  Series spurious;       ///< time, accumulated spurious mass
  std::optional<PlateauReport> plateau;
  std::vector<Check> checks;
  nlohmann::json summary;

  bool passed() const;
};

/// Solves flow, runs transport when enabled, evaluates the thresholds that
/// apply to the formulation, and writes outputs if a directory is given.
/// Threshold semantics (all relative to the boundary flux scale where noted):
///   local_balance       max |element imbalance| / scale, RT0 only
///   global_balance      |outflux - source| / scale
///   centerline_velocity max relative deviation from the layered Darcy
///                       velocity on the centerline, RT0 only
BenchmarkRun run_benchmark(const BenchmarkSpec& spec, Formulation formulation,
                           const RunOptions& options = {});

/// Concentration totals of two runs compared over time:
/// max_t |M_a(t) - M_b(t)| / M_a(0). A run that stopped early at steady state
/// keeps its last value.
double mass_discrepancy(const TransientResult& a, const TransientResult& b);

struct CylinderSweepRow {
  double k2 = 0.0;
  double discrepancy = 0.0;   ///< VMS vs RT0 concentration totals
  double rt0_spurious = 0.0;  ///< max |spurious mass| / M(0) with the RT0 velocity
  double vms_spurious = 0.0;
  double vms_global_balance = 0.0;
};

struct CylinderSweep {
  std::vector<CylinderSweepRow> rows;
  std::vector<Check> checks;
  nlohmann::json summary;
  bool passed() const;
};

/// Runs both formulations for each inclusion permeability. Checks: discrepancy
/// below `max_discrepancy` for every k2 and the RT0 spurious mass at round-off
/// level (below `rt0_noise`) for every k2.
CylinderSweep cylinder_sweep(const std::vector<double>& k2_values, const RunOptions& options = {},
                             double max_discrepancy = 0.02, double rt0_noise = 1e-10,
                             int mesh_scale = 1);

struct LeakyWellRow {
  double beta = 0.0;
  Formulation formulation = Formulation::rt0;
  double steady_leak = 0.0;
  bool plateau = false;
  double plateau_time = 0.0;
  int picard_iterations = 0;
  double global_balance = 0.0;
};

struct LeakyWellStudy {
  std::vector<LeakyWellRow> rows;
  double gap = 0.0;  ///< 1 - leak_vms / leak_rt0 at the first beta
  std::vector<Check> checks;
  nlohmann::json summary;
  bool passed() const;
};

/// Checks: VMS leak below RT0 with the gap within target +- tolerance at the
/// first beta; leak strictly decreasing in beta for each formulation; a
/// plateau detected for every run.
LeakyWellStudy leaky_well_study(const std::vector<double>& betas, const RunOptions& options = {},
                                double gap_target = 0.10, double gap_tolerance = 0.07,
                                int mesh_scale = 1);

struct ConvergenceRow {
  int cells = 0;  ///< cells per side
  double h = 0.0;
  double velocity_error = 0.0;
  double pressure_error = 0.0;
};

struct ConvergenceStudy {
  Formulation formulation = Formulation::rt0;
  std::vector<ConvergenceRow> rows;
  double velocity_rate = 0.0;
  double pressure_rate = 0.0;
  std::vector<Check> checks;
  nlohmann::json summary;
  bool passed() const;
};

/// Manufactured solution p = sin(pi x) sin(pi y) with k / mu = 1 on the unit
/// square, p = 0 on the boundary, phi = 2 pi^2 p. Rate windows: RT0 velocity
/// and pressure 1 +- 0.25; VMS velocity 2 +- 0.3 and pressure >= 0.75.
ConvergenceStudy convergence_study(Formulation formulation,
                                   const std::vector<int>& cells = {8, 16, 32, 64},
                                   Execution execution = Execution::parallel);

nlohmann::json checks_json(const std::vector<Check>& checks);

}  // namespace pfb
