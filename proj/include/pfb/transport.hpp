#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfb/flow_problem.hpp"
#include "pfb/linalg.hpp"
#include "pfb/output.hpp"
#include "pfb/parallel.hpp"
#include "pfb/sparse_lu.hpp"

namespace pfb {

/// Dirichlet concentration on Gamma^D, or prescribed diffusive influx
/// D grad c . n = t_p on Gamma^N (zero is the natural condition).
struct TransportBoundaryCondition {
  enum class Kind { dirichlet, flux };
  Kind kind = Kind::flux;
  ScalarField value;

  static TransportBoundaryCondition dirichlet(ScalarField c) { return {Kind::dirichlet, std::move(c)}; }
  static TransportBoundaryCondition flux(ScalarField t) { return {Kind::flux, std::move(t)}; }
  static TransportBoundaryCondition zero_flux() { return flux([](Point) { return 0.0; }); }
};

using SpaceTimeField = std::function<double(Point, double)>;

struct TransportProblem {
  std::shared_ptr<const Mesh> mesh;
  double diffusivity = 0.01;
  SpaceTimeField source;  ///< f(x, t); empty means zero
  std::map<std::string, TransportBoundaryCondition, std::less<>> boundary;
  ScalarField initial;    ///< c0; empty means zero
  double dt = 0.01;
  double t_end = 1.0;

  /// Throws ConfigurationError unless D > 0, dt > 0, t_end >= 0 and every
  /// boundary tag has a condition.
  void validate() const;
  /// Nodes on Dirichlet edges, ascending.
  std::vector<Index> dirichlet_nodes() const;
};

struct TransportState {
  std::vector<double> c;
  double time = 0.0;
};

struct TransportMatrices {
  CsrMatrix mass;       ///< (N_a, N_b)
  CsrMatrix advection;  ///< (N_a, v . grad N_b)
  CsrMatrix diffusion;  ///< D (grad N_a, grad N_b)
};

/// Element matrices on one triangle with the velocity sampled at the
/// edge-midpoint rule.
struct TransportElementMatrices {
  std::array<std::array<double, 3>, 3> mass{};
  std::array<std::array<double, 3>, 3> advection{};
  std::array<std::array<double, 3>, 3> diffusion{};
};
TransportElementMatrices element_matrices_transport(
    const TriangleGeometry& geometry, double diffusivity,
    const std::array<Vec2, 3>& velocity_at_midpoint_rule);

TransportMatrices assemble_transport(const TransportProblem& problem, const FlowSolution& velocity,
                                     Execution execution = Execution::parallel);
TransportMatrices assemble_transport_serial(const TransportProblem& problem,
                                            const FlowSolution& velocity);
/// F(t) = (N_a, f(t)) + integral over Gamma^N of N_a t_p.
std::vector<double> transport_load(const TransportProblem& problem, double time);

/// Initial nodal field with Dirichlet values imposed.
TransportState initial_state(const TransportProblem& problem);

/// Backward Euler with a matrix factored once:
/// (M + dt (A + K)) c_{n+1} = M c_n + dt F(t_{n+1}), Dirichlet rows replaced.
class BackwardEulerStepper {
 public:
  BackwardEulerStepper(const TransportProblem& problem, TransportMatrices matrices);
  TransportState step(const TransportState& state) const;
  const TransportMatrices& matrices() const { return matrices_; }

 private:
  const TransportProblem* problem_;
  TransportMatrices matrices_;
  std::vector<Index> dirichlet_;
  std::vector<double> dirichlet_values_;
  std::optional<SparseLu> lu_;
  bool has_load_ = false;
};

/// One step without reusing a factorization.
TransportState step_backward_euler(const TransportProblem& problem, const TransportState& state,
                                   const TransportMatrices& matrices);

/// Integral of the P1 field over the mesh.
double total_concentration(const Mesh& mesh, std::span<const double> c);

struct Probe {
  std::string name;
  Point at;
};

struct TransientOptions {
  double steady_tolerance = 1e-8;  ///< stop once ||c_{n+1} - c_n||_inf falls below
  int snapshot_every = 0;          ///< keep every n-th state; 0 keeps first and last only
  std::vector<Probe> probes;
  Execution execution = Execution::parallel;
  /// Called after every step including the initial state (step 0).
  std::function<void(int step, const TransportState&)> observer;
};

struct TransientResult {
  std::vector<TransportState> snapshots;
  Series series;  ///< time, total, min, max, then one column per probe
  int steps = 0;
  bool steady = false;
};

/// Number of steps to reach t_end: ceil(t_end / dt).
int step_count(double t_end, double dt);

TransientResult run_transient(const TransportProblem& problem, const FlowSolution& velocity,
                              const TransientOptions& options = {});

}  // namespace pfb
