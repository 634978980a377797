#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pfb/errors.hpp"
#include "pfb/mesh.hpp"

using namespace pfb;

namespace {

const Rectangle kUnit{{0, 0}, {1, 1}};

Mesh two_triangles() { return Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}); }

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("structured 20x20 counts") {
    const Mesh m = generate_structured(20, 20, kUnit);
    CHECK(m.num_nodes() == 441);
    CHECK(m.num_triangles() == 800);
    CHECK(m.num_edges() == 1240);
    CHECK(euler_characteristic(m) == 1);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("edge topology") {
    const Mesh m = generate_structured(3, 2, {{0, 0}, {3, 2}});
    for (Index t = 0; t < m.num_triangles(); ++t) {
      const Triangle& tri = m.triangle(t);
      for (int i = 0; i < 3; ++i) {
        const Edge& e = m.edge(tri.edges[i]);
        // Edge i is opposite vertex i.
        CHECK(e.nodes[0] != tri.vertices[i]);
        CHECK(e.nodes[1] != tri.vertices[i]);
        CHECK(e.nodes[0] < e.nodes[1]);
      }
    }
    for (Index e = 0; e < m.num_edges(); ++e) {
      const Edge& edge = m.edge(e);
      if (edge.on_boundary()) continue;
      // The two triangles sharing an edge see opposite signs.
      int sum = 0;
      for (Index t : edge.triangles) {
        const auto& edges = m.triangle(t).edges;
        const int i = static_cast<int>(std::find(edges.begin(), edges.end(), e) - edges.begin());
        sum += m.edge_sign(t, i);
      }
      CHECK(sum == 0);
    }
  }

  TEST_CASE("outward normals and barycentric gradients") {
    const Mesh m = two_triangles();
    for (Index t = 0; t < m.num_triangles(); ++t) {
      const TriangleGeometry g = m.geometry(t);
      Vec2 sum{0, 0};
      for (int i = 0; i < 3; ++i) {
        sum = sum + g.length[i] * g.normal[i];
        // The normal of edge i points away from vertex i.
        const Point mid = 0.5 * (g.vertex[(i + 1) % 3] + g.vertex[(i + 2) % 3]);
        CHECK(dot(mid - g.vertex[i], g.normal[i]) > 0.0);
        // grad lambda_i = -l_i n_i / (2A).
        CHECK(g.grad_lambda[i].x == doctest::Approx(-g.length[i] * g.normal[i].x / (2 * g.area)));
        CHECK(g.grad_lambda[i].y == doctest::Approx(-g.length[i] * g.normal[i].y / (2 * g.area)));
      }
      CHECK(std::abs(sum.x) < 1e-15);
      CHECK(std::abs(sum.y) < 1e-15);
    }
  }

  TEST_CASE("invalid triangles are rejected") {
    CHECK_THROWS_AS(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}), GeometryError);
    CHECK_THROWS_AS(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), GeometryError);
    CHECK_THROWS_AS(Mesh({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 1}},
                         {{0, 1, 2}, {1, 3, 2}, {0, 1, 4}}),
                    GeometryError);
  }

  TEST_CASE("boundary tagging") {
    const Mesh m = mark_boundaries(generate_structured(4, 4, kUnit), box_sides(kUnit));
    CHECK(m.edges_with_tag("left").size() == 4);
    CHECK(m.edges_with_tag("top").size() == 4);
    CHECK(m.boundary_edges().size() == 16);
    CHECK(m.boundary_id("nowhere") == -1);
    for (Index e : m.edges_with_tag("right")) CHECK(m.midpoint(e).x == doctest::Approx(1.0));
    CHECK_THROWS_AS(mark_boundaries(generate_structured(2, 2, kUnit),
                                    [](Point p) -> std::optional<std::string> {
                                      if (p.x == 0.0) return "left";
                                      return std::nullopt;
                                    }),
                    IncompleteBoundaryError);
  }

  TEST_CASE("layers and inclusions") {
    const Mesh m = mark_regions(generate_structured(10, 10, kUnit), horizontal_layers(kUnit, 5));
    const auto tags = m.region_tags();
    CHECK(tags == std::vector<int>{1, 2, 3, 4, 5});
    for (Index t = 0; t < m.num_triangles(); ++t) {
      CHECK(m.triangle(t).region == 1 + static_cast<int>(m.centroid(t).y / 0.2));
    }
    const Mesh d = mark_regions(generate_structured(10, 10, kUnit), disk_inclusion({0.5, 0.5}, 0.25, 2, 1));
    for (Index t = 0; t < d.num_triangles(); ++t) {
      CHECK((d.triangle(t).region == 2) == (norm(d.centroid(t) - Point{0.5, 0.5}) <= 0.25));
    }
  }

  TEST_CASE("text round trip") {
    const Mesh m = mark_boundaries(mark_regions(generate_structured(3, 2, kUnit), horizontal_layers(kUnit, 2)),
                                   box_sides(kUnit));
    const std::string text = format_mesh(m);
    const Mesh back = parse_mesh(text);
    CHECK(back == m);
    CHECK(format_mesh(back) == text);
  }

  TEST_CASE("malformed mesh text") {
    CHECK_THROWS_AS(parse_mesh("garbage"), ParseError);
    CHECK_THROWS_AS(parse_mesh(""), ParseError);
  }

  TEST_CASE("point location") {
    const Mesh m = generate_structured(5, 5, kUnit);
    const PointLocator locator(m);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      const Point p{u(rng), u(rng)};
      const Index t = locator.locate(p);
      REQUIRE(t != kNoIndex);
      for (double l : barycentric(m.geometry(t), p)) CHECK(l >= -1e-12);
    }
    CHECK(locator.locate({1.5, 0.5}) == kNoIndex);
  }

  TEST_CASE("node permutation preserves geometry and tags") {
    const Mesh m = mark_boundaries(generate_structured(4, 3, kUnit), box_sides(kUnit));
    std::vector<Index> perm(m.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(11));
    const Mesh p = permute_nodes(m, perm);
    CHECK(p.num_edges() == m.num_edges());
    CHECK(p.total_area() == doctest::Approx(m.total_area()));
    CHECK(p.edges_with_tag("left").size() == m.edges_with_tag("left").size());
    for (Index i = 0; i < m.num_nodes(); ++i) CHECK(p.node(perm[i]) == m.node(i));
    const std::vector<Index> bad(m.num_nodes(), 0);
    CHECK_THROWS_AS(permute_nodes(m, bad), InvalidArgument);
  }

  TEST_CASE("circle fitting keeps a valid mesh") {
    const Mesh m = generate_structured(24, 19, {{0, 0}, {1.2, 0.95}});
    const Mesh f = fit_circle(m, {0.6, 0.475}, 0.24, 0.025);
    CHECK(f.num_triangles() == m.num_triangles());
    CHECK(f.total_area() == doctest::Approx(m.total_area()).epsilon(1e-12));
    int on_circle = 0;
    for (Index v = 0; v < f.num_nodes(); ++v) {
      if (std::abs(norm(f.node(v) - Point{0.6, 0.475}) - 0.24) < 1e-12) ++on_circle;
    }
    CHECK(on_circle > 20);
    for (Index t = 0; t < f.num_triangles(); ++t) CHECK(f.geometry(t).area >= 0.2 * m.geometry(t).area);
  }
}
