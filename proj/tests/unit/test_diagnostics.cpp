#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pfb/diagnostics.hpp"
#include "pfb/errors.hpp"
#include "pfb/flow_driver.hpp"
#include "pfb/flow_rt0.hpp"

using namespace pfb;

namespace {

FlowSolution random_solution(std::shared_ptr<const Mesh> mesh, Formulation f, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> dofs(dof_count(*mesh, f));
  for (double& d : dofs) d = u(rng);
  return FlowSolution(f, std::move(mesh), std::move(dofs));
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("element balances telescope to the global balance on random fields") {
    std::mt19937 rng(42);
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      CAPTURE(to_string(f));
      for (int trial = 0; trial < 10; ++trial) {
        const FlowSolution s = random_solution(test::unit_mesh(3 + trial), f, rng);
        const ScalarField phi = [trial](Point x) { return std::cos(trial * x.x) - x.y; };
        const MassBalanceReport r = element_mass_balance(s, phi);
        CHECK(std::abs(r.sum_elements - r.global) <= 1e-12 * r.flux_scale);
      }
    }
  }

  TEST_CASE("RT0 solutions balance per element; VMS only globally") {
    // A tenfold permeability jump along y = 0.5 with a distributed source.
    const auto mesh = std::make_shared<const Mesh>(
        mark_regions(*test::unit_mesh(10), [](Point c) { return c.y > 0.5 ? 1 : 0; }));
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      CAPTURE(to_string(f));
      FlowProblem p = test::linear_pressure_problem(mesh, f);
      p.materials.regions[1] = {10.0, 1.0};
      p.source = [](Point x) { return 4.0 * x.x * x.y; };
      const FlowSolution s = solve_flow(p);
      const MassBalanceReport r = element_mass_balance(s, p.source);
      CHECK(std::abs(r.global) <= 1e-10 * r.flux_scale);
      if (f == Formulation::rt0) {
        CHECK(r.max_abs <= 1e-10 * r.flux_scale);
      } else {
        CHECK(r.max_abs > 1e-6 * r.flux_scale);
      }
      CHECK(r.worst.size() == 10);
      CHECK(std::abs(r.element[r.worst[0]]) == r.max_abs);
    }
  }

  TEST_CASE("leak rate is linear in concentration and velocity") {
    std::mt19937 rng(1);
    const auto mesh = test::unit_mesh(5);
    const auto segment = mesh->edges_with_tag("top");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      const FlowSolution v1 = random_solution(mesh, f, rng), v2 = random_solution(mesh, f, rng);
      std::vector<double> sum(v1.dofs().size());
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = 2.0 * v1.dofs()[i] - 3.0 * v2.dofs()[i];
      const FlowSolution vs(f, mesh, sum);
      TransportState c1{std::vector<double>(mesh->num_nodes()), 0.0}, c2 = c1, cs = c1;
      for (Index i = 0; i < mesh->num_nodes(); ++i) {
        c1.c[i] = u(rng);
        c2.c[i] = u(rng);
        cs.c[i] = 0.5 * c1.c[i] + 4.0 * c2.c[i];
      }
      const double lhs_v = leak_rate(c1, vs, segment);
      const double rhs_v = 2.0 * leak_rate(c1, v1, segment) - 3.0 * leak_rate(c1, v2, segment);
      CHECK(lhs_v == doctest::Approx(rhs_v).epsilon(1e-12));
      const double lhs_c = leak_rate(cs, v1, segment);
      const double rhs_c = 0.5 * leak_rate(c1, v1, segment) + 4.0 * leak_rate(c2, v1, segment);
      CHECK(lhs_c == doctest::Approx(rhs_c).epsilon(1e-12));
    }
  }

  TEST_CASE("leak rate of a uniform upward flow") {
    const auto mesh = test::unit_mesh(4);
    const auto dofs = interpolate_rt0(*mesh, [](Point) { return Vec2{0.0, 2.0}; });
    std::vector<double> full(dofs);
    full.resize(dof_count(*mesh, Formulation::rt0), 0.0);
    const FlowSolution v(Formulation::rt0, mesh, full);
    const TransportState c{std::vector<double>(mesh->num_nodes(), 0.5), 0.0};
    CHECK(leak_rate(c, v, mesh->edges_with_tag("top")) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("convergence rate fit") {
    const std::vector<std::pair<double, double>> first{{0.1, 0.1}, {0.05, 0.05}};
    const std::vector<std::pair<double, double>> second{{0.1, 0.1}, {0.05, 0.025}};
    CHECK(convergence_rate(first) == doctest::Approx(1.0));
    CHECK(convergence_rate(second) == doctest::Approx(2.0));
    const std::vector<std::pair<double, double>> single{{0.1, 0.1}};
    CHECK_THROWS_AS(convergence_rate(single), InvalidArgument);
  }

  TEST_CASE("unknown counts") {
    const Mesh m20 = generate_structured(20, 20, test::kUnitSquare);
    CHECK(dof_counts(m20, Formulation::rt0) == 2040);
    CHECK(dof_counts(m20, Formulation::vms) == 1323);
    const Mesh m1 = generate_structured(1, 1, test::kUnitSquare);
    CHECK(dof_counts(m1, Formulation::rt0) == 7);
    CHECK(dof_counts(m1, Formulation::vms) == 12);
  }

  TEST_CASE("plateau detection") {
    std::vector<double> t, rising, steady;
    for (int i = 0; i <= 100; ++i) {
      t.push_back(i);
      rising.push_back(i);
      steady.push_back(1.0 - std::exp(-0.2 * i));
    }
    CHECK_FALSE(detect_plateau(t, rising).detected);
    const PlateauReport r = detect_plateau(t, steady);
    CHECK(r.detected);
    CHECK(r.value == steady.back());
    // exp(-0.2 t) first drops below 0.01 at t = 24 on the integer grid.
    CHECK(r.time == doctest::Approx(24.0));
  }

  TEST_CASE("spurious mass vanishes for a conservative velocity") {
    const FlowProblem p = test::linear_pressure_problem(test::unit_mesh(5), Formulation::rt0);
    const FlowSolution s = solve_flow(p);
    SpuriousMassMeter meter(s);
    const std::vector<double> c(s.mesh().num_nodes(), 1.0);
    CHECK(std::abs(meter.rate(c)) <= 1e-13);
    meter.accumulate(c, 0.1);
    CHECK(std::abs(meter.total()) <= 1e-14);
  }
}
