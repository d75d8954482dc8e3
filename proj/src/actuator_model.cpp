#include "exo/actuator_model.hpp"

#include <cmath>
#include <string>

#include "exo/errors.hpp"
#include "exo/units.hpp"

namespace exo {

namespace {

using units::kPi;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

void require_bend_angle(double angle) {
  if (!std::isfinite(angle) || angle < 0.0 || angle >= kPi) {
    throw DomainError("bend angle must lie in [0, pi), got " + std::to_string(angle));
  }
}

// Slack for snapping pi / alpha and millimeter rounding onto exact integers
// that floating point lands just beside.
constexpr double kIntegerSnap = 1e-9;

}  // namespace

ActuatorGeometry ActuatorGeometry::from_diameter(int count, double diameter,
                                                 FlatWidthRounding rounding) {
  if (count < 1) throw DomainError("actuator count must be >= 1");
  require_positive(diameter, "actuator diameter");
  const double width = rounding == FlatWidthRounding::Exact ? exo::flat_width(diameter)
                                                            : manufacturing_flat_width(diameter);
  return ActuatorGeometry(count, diameter, width, rounding);
}

ActuatorGeometry ActuatorGeometry::from_flat_width(int count, double width) {
  if (count < 1) throw DomainError("actuator count must be >= 1");
  return ActuatorGeometry(count, inflated_diameter(width), width, FlatWidthRounding::Exact);
}

ActuatorGeometry ActuatorGeometry::with_count(int count) const {
  if (count < 1) throw DomainError("actuator count must be >= 1");
  return ActuatorGeometry(count, diameter_, flat_width_, rounding_);
}

OperatingPoint::OperatingPoint(double pressure, double bend_angle)
    : pressure_(pressure), bend_angle_(bend_angle) {
  if (!std::isfinite(pressure) || pressure < 0.0) {
    throw DomainError("pressure must be finite and >= 0");
  }
  require_bend_angle(bend_angle);
}

LegGeometry::LegGeometry(double diameter) : diameter_(diameter) {
  require_positive(diameter, "leg diameter");
}

double cross_section_area(double diameter) { return kPi * diameter * diameter / 4.0; }

WedgeVolume interference_volume(const ActuatorGeometry& geom, double angle) {
  require_bend_angle(angle);
  const double d = geom.diameter();
  return {cross_section_area(d) * d * std::tan(angle / 2.0)};
}

WedgeVolume interference_volume_numeric(const ActuatorGeometry& geom, double angle,
                                        int resolution) {
  require_bend_angle(angle);
  if (resolution < 1) throw DomainError("quadrature resolution must be >= 1");

  // Polar coordinates (rho, phi) about the crease point; the disk is
  // rho <= d sin(phi), phi in (0, pi), and the height above the crease is
  // y = rho sin(phi). Each ray is split into `resolution` equal radial cells.
  const double d = geom.diameter();
  const double depth_per_height = 2.0 * std::tan(angle / 2.0);
  const double dphi = kPi / resolution;

  double total = 0.0;
  for (int j = 0; j < resolution; ++j) {
    const double phi = (j + 0.5) * dphi;
    const double sin_phi = std::sin(phi);
    const double rho_max = d * sin_phi;
    const double drho = rho_max / resolution;
    double ray = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double rho = (i + 0.5) * drho;
      const double y = rho * sin_phi;
      ray += depth_per_height * y * rho * drho;
    }
    total += ray * dphi;
  }
  return {total};
}

double exosuit_torque(const ActuatorGeometry& geom, const OperatingPoint& op) {
  const double d = geom.diameter();
  const double c = std::cos(op.bend_angle() / 2.0);
  return kPi * geom.count() * op.pressure() * d * d * d / (8.0 * c * c);
}

double torque_numeric(const ActuatorGeometry& geom, const OperatingPoint& op, double step) {
  require_positive(step, "finite-difference step");
  const double theta = op.bend_angle();
  if (theta - step < 0.0 || theta + step >= kPi) {
    throw DomainError("finite-difference stencil leaves [0, pi)");
  }
  const double forward = interference_volume(geom, theta + step).value;
  const double backward = interference_volume(geom, theta - step).value;
  return geom.count() * op.pressure() * (forward - backward) / (2.0 * step);
}

double flat_width(double diameter) {
  require_positive(diameter, "inflated diameter");
  return kPi * diameter / 2.0;
}

double inflated_diameter(double width) {
  require_positive(width, "flat width");
  return 2.0 * width / kPi;
}

double manufacturing_flat_width(double diameter) {
  const double exact_mm = units::m_to_mm(flat_width(diameter));
  return units::mm_to_m(std::ceil(exact_mm - kIntegerSnap));
}

TangencyAngle tangency_angle(const LegGeometry& leg, double diameter) {
  require_positive(diameter, "actuator diameter");
  // Triangle: leg center plus two adjacent actuator centers. Two sides are the
  // center distance (D + d) / 2, the third is d (neighbors touch).
  const double center_distance = (leg.diameter() + diameter) / 2.0;
  const double r2 = center_distance * center_distance;
  const double cos_alpha = (2.0 * r2 - diameter * diameter) / (2.0 * r2);
  return {std::acos(cos_alpha)};
}

int max_actuator_count(const LegGeometry& leg, double diameter) {
  const double ratio = kPi / tangency_angle(leg, diameter).value;
  return static_cast<int>(std::floor(ratio + kIntegerSnap));
}

StressCoverage stress_coverage(const LegGeometry& leg, const ActuatorGeometry& geom) {
  const int n_max = max_actuator_count(leg, geom.diameter());
  if (geom.count() > n_max) {
    throw ConstraintError("coronal_plane", "actuator count " + std::to_string(geom.count()) +
                                               " exceeds the packing limit " +
                                               std::to_string(n_max));
  }
  const double covered = geom.count() * tangency_angle(leg, geom.diameter()).value;
  return {covered, covered / (2.0 * kPi)};
}

double profile_depth(const ActuatorGeometry& geom) { return geom.diameter(); }

}  // namespace exo
