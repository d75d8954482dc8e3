#pragma once

// Bench torque measurements and their agreement with the torque model.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exo/actuator_model.hpp"

namespace exo {

struct TorqueMeasurement {
  double pressure;    // Pa
  double bend_angle;  // rad
  double torque;      // N m
};

/// Parses CSV with header `pressure_kpa,angle_deg,torque_Nm`. An empty input
/// yields an empty list. Throws ParseError (with line number) on malformed
/// rows and ValidationError on negative values or angles >= 180 deg.
std::vector<TorqueMeasurement> parse_measurements(std::string_view text);

/// Inverse of parse_measurements, 6 significant digits.
std::string serialize_measurements(const std::vector<TorqueMeasurement>& rows);

struct PointError {
  TorqueMeasurement measured;
  double predicted;  // N m
  /// (predicted - measured) / measured, or predicted - measured (N m) when
  /// the measurement is zero and `absolute` is set.
  double error;
  bool absolute = false;
};

struct LinearFit {
  double bend_angle;   // group mean angle, rad
  std::size_t points;
  double slope;        // N m / Pa
  double intercept;    // N m
  double r_squared;
  std::optional<double> model_slope;  // pi n d^3 / (8 cos^2(theta/2)), N m / Pa
};

struct LinearityReport {
  std::vector<LinearFit> fits;
  std::vector<std::string> warnings;
};

struct ValidationReport {
  std::vector<PointError> points;
  double max_error = 0.0;  // max |relative error| over non-absolute points
  LinearityReport linearity;
  std::vector<std::string> warnings;
};

/// Measurements in one group differ in angle by at most this much.
inline constexpr double kAngleGroupTolerance = 0.5 * 3.14159265358979323846 / 180.0;

/// Per-angle OLS of torque against pressure. Groups with fewer than two
/// distinct pressures are skipped with a warning. With `geom`, each fit also
/// carries the model's exact slope at the group angle.
LinearityReport pressure_linearity(const std::vector<TorqueMeasurement>& rows,
                                   const ActuatorGeometry* geom = nullptr);

/// Compares every measurement to exosuit_torque for the as-built geometry.
ValidationReport validate(const std::vector<TorqueMeasurement>& rows, const ActuatorGeometry& geom,
                          const LegGeometry& leg);

}  // namespace exo
