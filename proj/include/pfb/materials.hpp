#pragma once

#include <map>

#include "pfb/geometry.hpp"
#include "pfb/mesh.hpp"

namespace pfb {

/// mu(p) = mu0 * exp(beta * p). beta == 0 is the constant-viscosity model.
struct ViscosityModel {
  double mu0 = 1.0;
  double beta = 0.0;

  static ViscosityModel constant(double mu0) { return {mu0, 0.0}; }
  static ViscosityModel barus(double mu0, double beta) { return {mu0, beta}; }

  bool pressure_dependent() const { return beta != 0.0; }
};

/// Throws OverflowError when beta * p > 700 and InvalidArgument for non-finite p.
double viscosity_at(const ViscosityModel& model, double pressure);

struct RegionMaterial {
  double permeability = 1.0;  ///< m^2
  double density = 1.0;       ///< kg/m^2 as tabulated; only rho * b enters
};

struct MaterialField {
  std::map<int, RegionMaterial> regions;
  ViscosityModel viscosity;
  Vec2 body_force;  ///< specific body force b, m/s^2

  /// Throws ConfigurationError for an unknown region.
  const RegionMaterial& region(int tag) const;
  /// Throws ConfigurationError if any region of the mesh is missing or has k <= 0.
  void validate(const Mesh& mesh) const;
};

/// k / mu(p) for the triangle's region.
double mobility_at(const MaterialField& field, const Triangle& tri, double pressure);

}  // namespace pfb
