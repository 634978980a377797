#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfb/geometry.hpp"

namespace pfb {

using Index = int;
inline constexpr Index kNoIndex = -1;

struct Triangle {
  std::array<Index, 3> vertices{};  ///< counter-clockwise
  std::array<Index, 3> edges{};     ///< edges[i] is opposite vertices[i]
  int region = 0;
};

struct Edge {
  std::array<Index, 2> nodes{};                    ///< nodes[0] < nodes[1]
  std::array<Index, 2> triangles{kNoIndex, kNoIndex};
  int boundary = kNoIndex;                         ///< index into Mesh::boundary_names(), or -1

  bool on_boundary() const { return triangles[1] == kNoIndex; }
};

/// Per-triangle derived geometry. Local edge i is opposite local vertex i.
struct TriangleGeometry {
  std::array<Point, 3> vertex;
  double area = 0.0;
  std::array<double, 3> length{};     ///< length of edge i
  std::array<Vec2, 3> grad_lambda{};  ///< gradients of the barycentric coordinates
  std::array<Vec2, 3> normal{};       ///< unit outward normal of edge i
  Point centroid;
};

TriangleGeometry triangle_geometry(const std::array<Point, 3>& vertices);

/// Conforming triangulation with edge topology, region tags, and boundary tags.
///
/// Edges are numbered in order of first appearance while scanning triangles and
/// their local edges 0, 1, 2, so the numbering is a pure function of the
/// triangle list. The global normal of an edge is the direction from its lower
/// to its higher node id rotated by -90 degrees.
class Mesh {
 public:
  Mesh() = default;

  /// Builds edge topology. Throws GeometryError for clockwise or degenerate
  /// triangles and for non-manifold edges.
  Mesh(std::vector<Point> nodes, std::vector<std::array<Index, 3>> triangles,
       std::vector<int> regions = {});

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Edge> edges() const { return edges_; }
  const Point& node(Index i) const { return nodes_[i]; }
  const Triangle& triangle(Index t) const { return triangles_[t]; }
  const Edge& edge(Index e) const { return edges_[e]; }

  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  TriangleGeometry geometry(Index t) const;
  std::array<Point, 3> vertices(Index t) const;
  Point centroid(Index t) const;
  Point midpoint(Index e) const;
  double length(Index e) const;

  /// Unit global normal of edge e.
  Vec2 global_normal(Index e) const;

  /// +1 when the global normal of local edge i of triangle t points out of t.
  int edge_sign(Index t, int local_edge) const;

  /// Triangle adjacent to a boundary edge and the local index of that edge in it.
  std::pair<Index, int> boundary_owner(Index e) const;

  std::span<const std::string> boundary_names() const { return boundary_names_; }
  std::optional<std::string_view> boundary_tag(Index e) const;
  /// -1 when no edge carries the tag.
  int boundary_id(std::string_view tag) const;
  std::vector<Index> boundary_edges() const;
  std::vector<Index> edges_with_tag(std::string_view tag) const;
  std::vector<int> region_tags() const;

  /// Returns a copy with regions replaced.
  Mesh with_regions(std::vector<int> regions) const;
  /// Returns a copy whose boundary edges are tagged. `tags[e]` is ignored for interior edges.
  Mesh with_boundary_tags(const std::vector<std::optional<std::string>>& tags) const;

  double total_area() const;

 private:
  void build_edges();

  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::string> boundary_names_;
};

/// Structured triangulation of bbox with nx by ny cells, each split along the
/// lower-left to upper-right diagonal. Nodes are numbered row by row from the
/// lower-left corner.
Mesh generate_structured(int nx, int ny, const Rectangle& bbox);

/// Tensor-product variant of generate_structured with explicit grid lines.
/// Both coordinate lists must be strictly increasing with at least 2 entries.
Mesh generate_tensor(std::span<const double> xs, std::span<const double> ys);

using RegionClassifier = std::function<int(Point centroid)>;
using BoundaryClassifier = std::function<std::optional<std::string>(Point midpoint)>;

Mesh mark_regions(const Mesh& mesh, const RegionClassifier& classifier);

/// Tags every boundary edge by the classifier applied to its midpoint. Throws
/// IncompleteBoundaryError when some boundary edge receives no tag.
Mesh mark_boundaries(const Mesh& mesh, const BoundaryClassifier& classifier);

/// Tags the four sides of an axis-aligned box as "left", "right", "bottom", "top".
BoundaryClassifier box_sides(const Rectangle& bbox);

/// Five (or `count`) horizontal layers of equal thickness numbered 1.. from the bottom.
RegionClassifier horizontal_layers(const Rectangle& bbox, int count);

/// `inside` for centroids within the disk, `outside` otherwise.
RegionClassifier disk_inclusion(Point center, double radius, int inside, int outside);

/// Moves nodes within `reach` of the circle radially onto it, nearest first,
/// skipping any move that would shrink an incident triangle below
/// `min_area_ratio` of its original area. Boundary tags are dropped; regions
/// are kept.
Mesh fit_circle(const Mesh& mesh, Point center, double radius, double reach,
                double min_area_ratio = 0.2);
/// V - E + T for the mesh; equals 1 for a simply connected domain.
long euler_characteristic(const Mesh& mesh);

/// Relabels nodes: node i of the input becomes node perm[i] of the output.
Mesh permute_nodes(const Mesh& mesh, std::span<const Index> perm);

/// Text serialization. The grammar is documented in docs/mesh_format.md.
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);
std::string format_mesh(const Mesh& mesh);
Mesh parse_mesh(std::string_view text);

bool operator==(const Mesh& a, const Mesh& b);

/// Finds the triangle containing a point using a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  /// kNoIndex when the point is outside the mesh. Points on shared edges go to
  /// the lowest-numbered containing triangle.
  Index locate(Point p) const;

 private:
  const Mesh* mesh_;
  Rectangle box_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<Index>> buckets_;
};

/// Barycentric coordinates of p with respect to the triangle.
std::array<double, 3> barycentric(const TriangleGeometry& g, Point p);

}  // namespace pfb
