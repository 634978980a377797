#include "pfb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "pfb/errors.hpp"

namespace pfb {

TriangleGeometry triangle_geometry(const std::array<Point, 3>& v) {
  TriangleGeometry g;
  g.vertex = v;
  const double twice_area = cross(v[1] - v[0], v[2] - v[0]);
  g.area = 0.5 * twice_area;
  for (int i = 0; i < 3; ++i) {
    const Point& a = v[(i + 1) % 3];
    const Point& b = v[(i + 2) % 3];
    const Vec2 d = b - a;
    g.length[i] = norm(d);
    g.normal[i] = (1.0 / g.length[i]) * rotate_cw(d);
    // grad lambda_i is perpendicular to edge i, pointing toward vertex i.
    g.grad_lambda[i] = (-1.0 / twice_area) * rotate_cw(d);
  }
  g.centroid = (1.0 / 3.0) * (v[0] + v[1] + v[2]);
  return g;
}

std::array<double, 3> barycentric(const TriangleGeometry& g, Point p) {
  std::array<double, 3> l{};
  for (int i = 0; i < 3; ++i) {
    l[i] = dot(g.grad_lambda[i], p - g.vertex[(i + 1) % 3]);
  }
  return l;
}

Mesh::Mesh(std::vector<Point> nodes, std::vector<std::array<Index, 3>> triangles,
           std::vector<int> regions)
    : nodes_(std::move(nodes)) {
  if (!regions.empty() && regions.size() != triangles.size()) {
    throw InvalidArgument("region list length does not match triangle count");
  }
  for (const Point& p : nodes_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("non-finite node coordinate");
    }
  }
  triangles_.resize(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (Index v : triangles[t]) {
      if (v < 0 || v >= num_nodes()) {
        throw GeometryError("triangle " + std::to_string(t) + " references missing node " +
                            std::to_string(v));
      }
    }
    triangles_[t].vertices = triangles[t];
    triangles_[t].region = regions.empty() ? 0 : regions[t];
    const TriangleGeometry g = triangle_geometry(vertices(static_cast<Index>(t)));
    const double lmax = std::max({g.length[0], g.length[1], g.length[2]});
    if (g.area <= 1e-14 * lmax * lmax) {
      throw GeometryError("triangle " + std::to_string(t) +
                          (g.area < 0 ? " is clockwise" : " is degenerate"));
    }
  }
  build_edges();
}

void Mesh::build_edges() {
  std::unordered_map<std::int64_t, Index> lookup;
  lookup.reserve(triangles_.size() * 2);
  edges_.clear();
  edges_.reserve(triangles_.size() * 3 / 2 + nodes_.size());
  for (Index t = 0; t < num_triangles(); ++t) {
    Triangle& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      Index a = tri.vertices[(i + 1) % 3];
      Index b = tri.vertices[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      const std::int64_t key = static_cast<std::int64_t>(a) * num_nodes() + b;
      auto [it, inserted] = lookup.try_emplace(key, num_edges());
      if (inserted) {
        Edge e;
        e.nodes = {a, b};
        e.triangles = {t, kNoIndex};
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.triangles[1] != kNoIndex) {
          throw GeometryError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is shared by more than two triangles");
        }
        e.triangles[1] = t;
      }
      tri.edges[i] = it->second;
    }
  }
  // Interior edges must be traversed in opposite directions by their two triangles.
  for (Index e = 0; e < num_edges(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.on_boundary()) continue;
    int s0 = 0, s1 = 0;
    for (int i = 0; i < 3; ++i) {
      if (triangles_[edge.triangles[0]].edges[i] == e) s0 = edge_sign(edge.triangles[0], i);
      if (triangles_[edge.triangles[1]].edges[i] == e) s1 = edge_sign(edge.triangles[1], i);
    }
    if (s0 == s1) throw GeometryError("overlapping triangles at edge " + std::to_string(e));
  }
}

std::array<Point, 3> Mesh::vertices(Index t) const {
  const auto& v = triangles_[t].vertices;
  return {nodes_[v[0]], nodes_[v[1]], nodes_[v[2]]};
}

TriangleGeometry Mesh::geometry(Index t) const { return triangle_geometry(vertices(t)); }

Point Mesh::centroid(Index t) const {
  const auto p = vertices(t);
  return (1.0 / 3.0) * (p[0] + p[1] + p[2]);
}

Point Mesh::midpoint(Index e) const {
  return 0.5 * (nodes_[edges_[e].nodes[0]] + nodes_[edges_[e].nodes[1]]);
}

double Mesh::length(Index e) const {
  return norm(nodes_[edges_[e].nodes[1]] - nodes_[edges_[e].nodes[0]]);
}

Vec2 Mesh::global_normal(Index e) const {
  const Vec2 d = nodes_[edges_[e].nodes[1]] - nodes_[edges_[e].nodes[0]];
  return (1.0 / norm(d)) * rotate_cw(d);
}

int Mesh::edge_sign(Index t, int i) const {
  // Local edge i runs counter-clockwise from vertex i+1 to vertex i+2, so its
  // outward normal is that direction rotated by -90 degrees.
  const auto& v = triangles_[t].vertices;
  return v[(i + 1) % 3] < v[(i + 2) % 3] ? 1 : -1;
}

std::pair<Index, int> Mesh::boundary_owner(Index e) const {
  const Index t = edges_[e].triangles[0];
  for (int i = 0; i < 3; ++i) {
    if (triangles_[t].edges[i] == e) return {t, i};
  }
  throw GeometryError("inconsistent edge topology");
}

std::optional<std::string_view> Mesh::boundary_tag(Index e) const {
  const int b = edges_[e].boundary;
  if (b < 0) return std::nullopt;
  return std::string_view(boundary_names_[b]);
}

int Mesh::boundary_id(std::string_view tag) const {
  for (std::size_t i = 0; i < boundary_names_.size(); ++i) {
    if (boundary_names_[i] == tag) return static_cast<int>(i);
  }
  return kNoIndex;
}

std::vector<Index> Mesh::boundary_edges() const {
  std::vector<Index> out;
  for (Index e = 0; e < num_edges(); ++e) {
    if (edges_[e].on_boundary()) out.push_back(e);
  }
  return out;
}

std::vector<Index> Mesh::edges_with_tag(std::string_view tag) const {
  std::vector<Index> out;
  const int id = boundary_id(tag);
  if (id < 0) return out;
  for (Index e = 0; e < num_edges(); ++e) {
    if (edges_[e].boundary == id) out.push_back(e);
  }
  return out;
}

std::vector<int> Mesh::region_tags() const {
  std::vector<int> tags;
  for (const Triangle& t : triangles_) tags.push_back(t.region);
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return tags;
}

Mesh Mesh::with_regions(std::vector<int> regions) const {
  if (regions.size() != triangles_.size()) {
    throw InvalidArgument("region list length does not match triangle count");
  }
  Mesh out = *this;
  for (std::size_t t = 0; t < regions.size(); ++t) out.triangles_[t].region = regions[t];
  return out;
}

Mesh Mesh::with_boundary_tags(const std::vector<std::optional<std::string>>& tags) const {
  if (tags.size() != edges_.size()) {
    throw InvalidArgument("boundary tag list length does not match edge count");
  }
  Mesh out = *this;
  out.boundary_names_.clear();
  for (Index e = 0; e < num_edges(); ++e) {
    Edge& edge = out.edges_[e];
    edge.boundary = kNoIndex;
    if (!edge.on_boundary() || !tags[e]) continue;
    int id = out.boundary_id(*tags[e]);
    if (id < 0) {
      id = static_cast<int>(out.boundary_names_.size());
      out.boundary_names_.push_back(*tags[e]);
    }
    edge.boundary = id;
  }
  return out;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (Index t = 0; t < num_triangles(); ++t) a += geometry(t).area;
  return a;
}

Mesh generate_tensor(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw InvalidArgument("tensor grid needs at least two lines per direction");
  }
  auto increasing = [](std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  if (!increasing(xs) || !increasing(ys)) {
    throw InvalidArgument("grid lines must be strictly increasing");
  }
  const Index nx = static_cast<Index>(xs.size()) - 1;
  const Index ny = static_cast<Index>(ys.size()) - 1;
  std::vector<Point> nodes;
  nodes.reserve(xs.size() * ys.size());
  for (double y : ys) {
    for (double x : xs) nodes.push_back({x, y});
  }
  std::vector<std::array<Index, 3>> tris;
  tris.reserve(2 * static_cast<std::size_t>(nx) * ny);
  const auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
  return Mesh(std::move(nodes), std::move(tris));
}

Mesh generate_structured(int nx, int ny, const Rectangle& bbox) {
  if (nx < 1 || ny < 1) throw InvalidArgument("cell counts must be positive");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0)) {
    throw InvalidArgument("bounding box is degenerate");
  }
  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) {
    xs[i] = i == nx ? bbox.upper.x : bbox.lower.x + bbox.width() * i / nx;
  }
  for (int j = 0; j <= ny; ++j) {
    ys[j] = j == ny ? bbox.upper.y : bbox.lower.y + bbox.height() * j / ny;
  }
  return generate_tensor(xs, ys);
}

Mesh mark_regions(const Mesh& mesh, const RegionClassifier& classifier) {
  std::vector<int> regions(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) regions[t] = classifier(mesh.centroid(t));
  return mesh.with_regions(std::move(regions));
}

Mesh mark_boundaries(const Mesh& mesh, const BoundaryClassifier& classifier) {
  std::vector<std::optional<std::string>> tags(mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).on_boundary()) continue;
    tags[e] = classifier(mesh.midpoint(e));
    if (!tags[e]) {
      const Point m = mesh.midpoint(e);
      throw IncompleteBoundaryError("boundary edge " + std::to_string(e) + " at (" +
                                    std::to_string(m.x) + ", " + std::to_string(m.y) +
                                    ") received no tag");
    }
  }
  return mesh.with_boundary_tags(tags);
}

BoundaryClassifier box_sides(const Rectangle& bbox) {
  const double tol = 1e-9 * std::max(bbox.width(), bbox.height());
  return [bbox, tol](Point m) -> std::optional<std::string> {
    if (std::abs(m.x - bbox.lower.x) <= tol) return "left";
    if (std::abs(m.x - bbox.upper.x) <= tol) return "right";
    if (std::abs(m.y - bbox.lower.y) <= tol) return "bottom";
    if (std::abs(m.y - bbox.upper.y) <= tol) return "top";
    return std::nullopt;
  };
}

RegionClassifier horizontal_layers(const Rectangle& bbox, int count) {
  if (count < 1) throw InvalidArgument("layer count must be positive");
  return [bbox, count](Point c) {
    const double s = (c.y - bbox.lower.y) / bbox.height();
    const int layer = static_cast<int>(std::floor(s * count));
    return std::clamp(layer, 0, count - 1) + 1;
  };
}

RegionClassifier disk_inclusion(Point center, double radius, int inside, int outside) {
  return [=](Point c) {
    const Vec2 d = c - center;
    return dot(d, d) <= radius * radius ? inside : outside;
  };
}

Mesh fit_circle(const Mesh& mesh, Point center, double radius, double reach, double min_area_ratio) {
  if (!(radius > 0.0) || !(reach >= 0.0)) throw InvalidArgument("fit_circle needs radius > 0 and reach >= 0");
  std::vector<Point> nodes(mesh.nodes().begin(), mesh.nodes().end());
  std::vector<std::vector<Index>> incident(nodes.size());
  std::vector<double> area0(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    for (Index v : mesh.triangle(t).vertices) incident[v].push_back(t);
    area0[t] = mesh.geometry(t).area;
  }
  std::vector<std::pair<double, Index>> candidates;
  for (Index v = 0; v < mesh.num_nodes(); ++v) {
    const double gap = std::abs(norm(nodes[v] - center) - radius);
    if (gap <= reach && norm(nodes[v] - center) > 0.0) candidates.emplace_back(gap, v);
  }
  std::sort(candidates.begin(), candidates.end());
  auto signed_area = [&](Index t) {
    const auto& v = mesh.triangle(t).vertices;
    return 0.5 * cross(nodes[v[1]] - nodes[v[0]], nodes[v[2]] - nodes[v[0]]);
  };
  for (const auto& [gap, v] : candidates) {
    const Point old = nodes[v];
    const Vec2 d = old - center;
    nodes[v] = center + (radius / norm(d)) * d;
    for (Index t : incident[v]) {
      if (signed_area(t) < min_area_ratio * area0[t]) {
        nodes[v] = old;
        break;
      }
    }
  }
  std::vector<std::array<Index, 3>> tris;
  std::vector<int> regions;
  for (const Triangle& t : mesh.triangles()) {
    tris.push_back(t.vertices);
    regions.push_back(t.region);
  }
  return Mesh(std::move(nodes), std::move(tris), std::move(regions));
}

long euler_characteristic(const Mesh& mesh) {
  return static_cast<long>(mesh.num_nodes()) - mesh.num_edges() + mesh.num_triangles();
}

Mesh permute_nodes(const Mesh& mesh, std::span<const Index> perm) {
  if (perm.size() != static_cast<std::size_t>(mesh.num_nodes())) {
    throw InvalidArgument("permutation size does not match node count");
  }
  std::vector<Point> nodes(mesh.num_nodes());
  std::vector<char> seen(mesh.num_nodes(), 0);
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    if (perm[i] < 0 || perm[i] >= mesh.num_nodes() || seen[perm[i]]) {
      throw InvalidArgument("not a permutation");
    }
    seen[perm[i]] = 1;
    nodes[perm[i]] = mesh.node(i);
  }
  std::vector<std::array<Index, 3>> tris;
  std::vector<int> regions;
  for (const Triangle& t : mesh.triangles()) {
    tris.push_back({perm[t.vertices[0]], perm[t.vertices[1]], perm[t.vertices[2]]});
    regions.push_back(t.region);
  }
  Mesh out(std::move(nodes), std::move(tris), std::move(regions));
  // Carry boundary tags over by matching node pairs.
  std::vector<std::optional<std::string>> tags(out.num_edges());
  std::unordered_map<std::int64_t, Index> lookup;
  for (Index e = 0; e < out.num_edges(); ++e) {
    const auto& n = out.edge(e).nodes;
    lookup[static_cast<std::int64_t>(n[0]) * out.num_nodes() + n[1]] = e;
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto tag = mesh.boundary_tag(e);
    if (!tag) continue;
    Index a = perm[mesh.edge(e).nodes[0]], b = perm[mesh.edge(e).nodes[1]];
    if (a > b) std::swap(a, b);
    tags[lookup.at(static_cast<std::int64_t>(a) * out.num_nodes() + b)] = std::string(*tag);
  }
  return out.with_boundary_tags(tags);
}

bool operator==(const Mesh& a, const Mesh& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_triangles() != b.num_triangles() ||
      a.num_edges() != b.num_edges()) {
    return false;
  }
  for (Index i = 0; i < a.num_nodes(); ++i) {
    if (!(a.node(i) == b.node(i))) return false;
  }
  for (Index t = 0; t < a.num_triangles(); ++t) {
    const Triangle &ta = a.triangle(t), &tb = b.triangle(t);
    if (ta.vertices != tb.vertices || ta.edges != tb.edges || ta.region != tb.region) return false;
  }
  for (Index e = 0; e < a.num_edges(); ++e) {
    if (a.edge(e).nodes != b.edge(e).nodes || a.edge(e).triangles != b.edge(e).triangles) {
      return false;
    }
    if (a.boundary_tag(e) != b.boundary_tag(e)) return false;
  }
  return true;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  if (mesh.num_nodes() == 0) return;
  box_.lower = box_.upper = mesh.node(0);
  for (const Point& p : mesh.nodes()) {
    box_.lower.x = std::min(box_.lower.x, p.x);
    box_.lower.y = std::min(box_.lower.y, p.y);
    box_.upper.x = std::max(box_.upper.x, p.x);
    box_.upper.y = std::max(box_.upper.y, p.y);
  }
  const double cells = std::max(1.0, std::sqrt(static_cast<double>(mesh.num_triangles())));
  const double aspect = box_.width() / std::max(box_.height(), 1e-300);
  nx_ = std::max(1, static_cast<int>(std::ceil(cells * std::sqrt(aspect))));
  ny_ = std::max(1, static_cast<int>(std::ceil(cells / std::sqrt(aspect))));
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  const auto bucket_x = [this](double x) {
    return std::clamp(static_cast<int>((x - box_.lower.x) / box_.width() * nx_), 0, nx_ - 1);
  };
  const auto bucket_y = [this](double y) {
    return std::clamp(static_cast<int>((y - box_.lower.y) / box_.height() * ny_), 0, ny_ - 1);
  };
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.vertices(t);
    const double x0 = std::min({v[0].x, v[1].x, v[2].x}), x1 = std::max({v[0].x, v[1].x, v[2].x});
    const double y0 = std::min({v[0].y, v[1].y, v[2].y}), y1 = std::max({v[0].y, v[1].y, v[2].y});
    for (int j = bucket_y(y0); j <= bucket_y(y1); ++j) {
      for (int i = bucket_x(x0); i <= bucket_x(x1); ++i) {
        buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
      }
    }
  }
}

Index PointLocator::locate(Point p) const {
  if (buckets_.empty()) return kNoIndex;
  const double tol = 1e-12;
  if (p.x < box_.lower.x - tol * box_.width() || p.x > box_.upper.x + tol * box_.width() ||
      p.y < box_.lower.y - tol * box_.height() || p.y > box_.upper.y + tol * box_.height()) {
    return kNoIndex;
  }
  const int i =
      std::clamp(static_cast<int>((p.x - box_.lower.x) / box_.width() * nx_), 0, nx_ - 1);
  const int j =
      std::clamp(static_cast<int>((p.y - box_.lower.y) / box_.height() * ny_), 0, ny_ - 1);
  for (Index t : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto l = barycentric(mesh_->geometry(t), p);
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return t;
  }
  return kNoIndex;
}

}  // namespace pfb
