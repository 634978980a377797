#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfb/flow_problem.hpp"
#include "pfb/transport.hpp"

namespace pfb {

/// a + b x + c y. Written to JSON as {"c": a, "x": b, "y": c}; a bare number
/// is accepted on input.
struct LinearField {
  double constant = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double operator()(Point p) const { return constant + dx * p.x + dy * p.y; }
  bool operator==(const LinearField&) const = default;
};

/// Point set used by region, boundary and initial-condition rules:
/// {"box": [x0, y0, x1, y1]} (closed, with a relative tolerance) or
/// {"disk": [cx, cy, r]} (closed).
struct Shape {
  enum class Kind { box, disk };
  Kind kind = Kind::box;
  std::vector<double> params;
  bool contains(Point p) const;
  bool operator==(const Shape&) const = default;
};

struct MeshRecipe {
  /// "structured": nx by ny cells on `box`; "tensor": explicit grid lines.
  std::string kind = "structured";
  Rectangle box{{0, 0}, {1, 1}};
  int nx = 20;
  int ny = 20;
  std::vector<double> xs;
  std::vector<double> ys;
  /// Uniform refinement factor applied when the mesh is built.
  int scale = 1;
  /// Nodes within this fraction of the mean cell size of a disk region's
  /// circle are moved onto it, so the disk boundary follows mesh edges.
  /// 0 leaves the grid untouched.
  double fit_disks = 0.0;
  bool operator==(const MeshRecipe& o) const {
    return kind == o.kind && box.lower == o.box.lower && box.upper == o.box.upper && nx == o.nx &&
           ny == o.ny && xs == o.xs && ys == o.ys && scale == o.scale && fit_disks == o.fit_disks;
  }
};

template <class Tag>
struct Rule {
  Tag tag{};
  Shape shape;
  bool operator==(const Rule&) const = default;
};

struct RegionSpec {
  int tag = 1;
  double permeability = 1.0;
  double density = 1.0;
  bool operator==(const RegionSpec&) const = default;
};

struct MaterialSpec {
  double mu0 = 1.0;
  double beta = 0.0;
  Vec2 body_force;
  std::vector<RegionSpec> regions;
  bool operator==(const MaterialSpec&) const = default;
};

struct BoundarySpec {
  std::string tag;
  std::string type;  ///< flow: "pressure" | "velocity"; transport: "dirichlet" | "flux"
  LinearField value;
  bool operator==(const BoundarySpec&) const = default;
};

struct TransportSpec {
  bool enabled = true;
  double diffusivity = 0.01;
  double dt = 0.01;
  double t_end = 1.0;
  double steady_tolerance = 1e-8;
  double initial = 0.0;                   ///< value where no rule matches
  std::vector<Rule<double>> initial_rules;  ///< first match wins, by node position
  std::vector<BoundarySpec> boundary;
  bool operator==(const TransportSpec&) const = default;
};

struct OutputSpec {
  std::vector<Probe> probes;
  /// Sample vertical line x = centerline_x at `centerline_count` equally
  /// spaced cell centres; count 0 disables.
  double centerline_x = 0.5;
  int centerline_count = 0;
  /// Edges whose midpoints fall inside the shape form the leak segment.
  std::optional<Shape> leak_segment;
  int snapshot_every = 0;
  bool operator==(const OutputSpec& o) const;
};

/// Data description of one benchmark case. `kind` selects the metrics the
/// runner computes: "multilayer", "cylinder_inclusion", "leaky_well" or
/// "generic".
struct BenchmarkSpec {
  std::string name;
  std::string kind = "generic";
  MeshRecipe mesh;
  int default_region = 1;
  std::vector<Rule<int>> regions;           ///< by centroid, first match wins
  std::vector<Rule<std::string>> boundaries;  ///< by edge midpoint, first match wins
  MaterialSpec materials;
  LinearField source;
  std::vector<BoundarySpec> flow_boundary;
  TransportSpec transport;
  OutputSpec outputs;
  double picard_relaxation = 1.0;
  std::map<std::string, double> thresholds;
  bool operator==(const BenchmarkSpec&) const = default;
};

nlohmann::json to_json(const BenchmarkSpec& spec);
/// Strict reader: unknown keys, wrong types and invalid values raise
/// ConfigError with a JSON pointer prefixed by `path`.
BenchmarkSpec spec_from_json(const nlohmann::json& j, const std::string& path = "");
/// Sorted-key, two-space-indented text with shortest round-trip numbers.
std::string format_spec(const BenchmarkSpec& spec);

/// Builds the tagged mesh described by the recipe and rules.
Mesh build_mesh(const BenchmarkSpec& spec);
FlowProblem build_flow_problem(const BenchmarkSpec& spec, std::shared_ptr<const Mesh> mesh,
                               Formulation formulation);
TransportProblem build_transport_problem(const BenchmarkSpec& spec, std::shared_ptr<const Mesh> mesh);
std::vector<Index> leak_segment_edges(const BenchmarkSpec& spec, const Mesh& mesh);

/// Five horizontal layers with k = (1, 5, 0.5, 3, 8)e-13 m^2 in a unit square,
/// mu = 1e-8, 1e5 Pa on the left and 0 on the right.
BenchmarkSpec multilayer();
/// Rectangle [0, 1.2] x [0, 0.95] with a centred disk of radius 0.24 and
/// permeability k2 in a matrix of k1 = 1e-8; contaminant starts in the disk.
BenchmarkSpec cylinder_inclusion(double k2 = 1e-7);
/// Vertical section: aquifers (k = 1e-12) above and below a 100 m aquitard
/// (k = 1e-14) crossed by a 0.3 m leaky well, fed by a 0.3 m injection port.
BenchmarkSpec leaky_well(double beta = 0.0);

/// Builtin spec by name; throws InvalidArgument for unknown names.
BenchmarkSpec builtin_benchmark(const std::string& name);
std::vector<std::string> builtin_benchmark_names();

}  // namespace pfb
