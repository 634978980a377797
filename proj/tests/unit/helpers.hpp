#pragma once

#include <memory>
#include <string>

#include "pfb/flow_problem.hpp"

namespace pfb::test {

inline const Rectangle kUnitSquare{{0, 0}, {1, 1}};

inline std::shared_ptr<const Mesh> unit_mesh(int n, const Rectangle& box = kUnitSquare) {
  return std::make_shared<const Mesh>(mark_boundaries(generate_structured(n, n, box), box_sides(box)));
}

/// Homogeneous k = mu = 1 on the mesh (region 0) with p = 1 - x on left and
/// right and no flow on top and bottom; the exact solution is v = (1, 0).
inline FlowProblem linear_pressure_problem(std::shared_ptr<const Mesh> mesh, Formulation f) {
  FlowProblem p;
  p.mesh = std::move(mesh);
  p.formulation = f;
  for (int tag : p.mesh->region_tags()) p.materials.regions[tag] = {1.0, 1.0};
  p.materials.viscosity = ViscosityModel::constant(1.0);
  const auto pressure = [](Point x) { return 1.0 - x.x; };
  p.boundary["left"] = FlowBoundaryCondition::pressure(pressure);
  p.boundary["right"] = FlowBoundaryCondition::pressure(pressure);
  p.boundary["bottom"] = FlowBoundaryCondition::no_flow();
  p.boundary["top"] = FlowBoundaryCondition::no_flow();
  return p;
}

}  // namespace pfb::test
