#include "pfb/materials.hpp"

#include <cmath>
#include <string>

#include "pfb/errors.hpp"

namespace pfb {

double viscosity_at(const ViscosityModel& model, double pressure) {
  if (!std::isfinite(pressure)) throw InvalidArgument("viscosity requested at non-finite pressure");
  if (model.beta == 0.0) return model.mu0;
  const double exponent = model.beta * pressure;
  if (exponent > 700.0) {
    throw OverflowError("Barus exponent beta*p = " + std::to_string(exponent) + " exceeds 700");
  }
  return model.mu0 * std::exp(exponent);
}

const RegionMaterial& MaterialField::region(int tag) const {
  const auto it = regions.find(tag);
  if (it == regions.end()) {
    throw ConfigurationError("no material defined for region " + std::to_string(tag));
  }
  return it->second;
}

void MaterialField::validate(const Mesh& mesh) const {
  if (!(viscosity.mu0 > 0.0)) throw ConfigurationError("reference viscosity must be positive");
  if (viscosity.beta < 0.0) throw ConfigurationError("Barus exponent must be non-negative");
  for (int tag : mesh.region_tags()) {
    if (!(region(tag).permeability > 0.0)) {
      throw ConfigurationError("permeability of region " + std::to_string(tag) +
                               " must be positive");
    }
  }
}

double mobility_at(const MaterialField& field, const Triangle& tri, double pressure) {
  return field.region(tri.region).permeability / viscosity_at(field.viscosity, pressure);
}

}  // namespace pfb
