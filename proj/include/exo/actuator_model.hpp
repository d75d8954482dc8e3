#pragma once

// Torque and packing geometry of bent cylindrical fabric actuators arranged
// around a circular leg cross-section.
//
// All quantities are SI: meters, pascals, radians, newton-meters.

namespace exo {

/// How the flat (pre-inflation) width B relates to the inflated diameter d.
enum class FlatWidthRounding {
  Exact,           ///< B = pi * d / 2
  UpToMillimeter,  ///< B = pi * d / 2 rounded up to the next whole millimeter
};

/// n identical cylindrical actuators of inflated diameter d and flat width B.
class ActuatorGeometry {
 public:
  /// Throws DomainError unless count >= 1 and diameter > 0.
  static ActuatorGeometry from_diameter(int count, double diameter,
                                        FlatWidthRounding rounding = FlatWidthRounding::Exact);
  static ActuatorGeometry from_flat_width(int count, double flat_width);

  int count() const noexcept { return count_; }
  double diameter() const noexcept { return diameter_; }
  double flat_width() const noexcept { return flat_width_; }
  FlatWidthRounding rounding() const noexcept { return rounding_; }

  ActuatorGeometry with_count(int count) const;

  friend bool operator==(const ActuatorGeometry&, const ActuatorGeometry&) = default;

 private:
  ActuatorGeometry(int count, double diameter, double flat_width, FlatWidthRounding rounding)
      : count_(count), diameter_(diameter), flat_width_(flat_width), rounding_(rounding) {}

  int count_;
  double diameter_;
  double flat_width_;
  FlatWidthRounding rounding_;
};

/// Gauge pressure and bend angle. Requires pressure >= 0, 0 <= bend_angle < pi.
class OperatingPoint {
 public:
  OperatingPoint(double pressure, double bend_angle);

  double pressure() const noexcept { return pressure_; }
  double bend_angle() const noexcept { return bend_angle_; }

 private:
  double pressure_;
  double bend_angle_;
};

/// Leg cross-section approximated as a circle of diameter D.
class LegGeometry {
 public:
  explicit LegGeometry(double diameter);

  double diameter() const noexcept { return diameter_; }

 private:
  double diameter_;
};

struct WedgeVolume {
  double value;  // m^3
};

struct TangencyAngle {
  double value;  // rad
};

struct StressCoverage {
  double radians;   // total covered central angle n * alpha
  double fraction;  // radians / (2 pi)
};

/// Cylinder base area S = pi d^2 / 4.
double cross_section_area(double diameter);

/// Closed-form interference volume V = S d tan(angle / 2) of one bent actuator.
/// Throws DomainError for angle outside [0, pi).
WedgeVolume interference_volume(const ActuatorGeometry& geom, double angle);

inline constexpr int kDefaultQuadratureResolution = 64;

/// Quadrature of the wedge depth 2 y tan(angle / 2) over the circular
/// cross-section, where y is the height above the crease (tangent to the disk).
///
/// Uses a polar grid centered on the crease point: `resolution` radial cells by
/// `resolution` angular cells, midpoint rule on both axes. The angular sum is
/// spectrally accurate (periodic smooth integrand); the radial midpoint rule
/// leaves a relative error of exactly 1 / (4 resolution^2), so doubling the
/// resolution quarters the error. resolution = 16 is already within 0.1%.
WedgeVolume interference_volume_numeric(const ActuatorGeometry& geom, double angle,
                                        int resolution = kDefaultQuadratureResolution);

/// Exosuit torque T = pi n p d^3 / (8 cos^2(theta / 2)).
double exosuit_torque(const ActuatorGeometry& geom, const OperatingPoint& op);

/// Central difference n p (V(theta + h) - V(theta - h)) / (2 h) on the closed-form
/// volume. Throws DomainError if the stencil leaves [0, pi).
double torque_numeric(const ActuatorGeometry& geom, const OperatingPoint& op, double step);

/// B = pi d / 2. Throws DomainError for d <= 0.
double flat_width(double diameter);
/// d = 2 B / pi. Throws DomainError for B <= 0.
double inflated_diameter(double flat_width);
/// flat_width(d) rounded up to the next whole millimeter (cutting pattern width).
double manufacturing_flat_width(double diameter);

/// Central angle between adjacent actuator centers, each actuator tangent to
/// the leg and to its neighbors (law of cosines on the center triangle).
TangencyAngle tangency_angle(const LegGeometry& leg, double diameter);

/// Largest n that keeps every actuator on one side of the coronal plane:
/// floor(pi / alpha). An exact integer ratio k admits k.
int max_actuator_count(const LegGeometry& leg, double diameter);

/// Throws DomainError for count < 1 and ConstraintError when count exceeds
/// max_actuator_count.
StressCoverage stress_coverage(const LegGeometry& leg, const ActuatorGeometry& geom);

/// Radial protrusion beyond the skin: an actuator tangent to the leg sticks out
/// one full diameter.
double profile_depth(const ActuatorGeometry& geom);

}  // namespace exo
