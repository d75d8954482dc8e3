#include "exo/experiment_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exo/errors.hpp"
#include "exo/units.hpp"
#include "text_util.hpp"

namespace exo {

namespace {
constexpr std::string_view kHeader = "pressure_kpa,angle_deg,torque_Nm";
}

std::vector<TorqueMeasurement> parse_measurements(std::string_view text) {
  const auto rows = detail::lines(text);
  std::vector<TorqueMeasurement> out;
  if (rows.empty()) return out;
  if (detail::trim(rows.front()) != kHeader) {
    throw ParseError(1, "expected header " + std::string(kHeader));
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const std::size_t line_no = k + 1;
    if (detail::trim(rows[k]).empty()) {
      throw ParseError(line_no, "empty row");
    }
    const auto fields = detail::split(rows[k]);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    const double kpa = detail::parse_double(fields[0], line_no, "pressure_kpa");
    const double deg = detail::parse_double(fields[1], line_no, "angle_deg");
    const double torque = detail::parse_double(fields[2], line_no, "torque_Nm");
    if (kpa < 0.0 || deg < 0.0 || torque < 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": values must be nonnegative");
    }
    if (deg >= 180.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": angle must be below 180 deg");
    }
    out.push_back({units::kpa_to_pa(kpa), units::deg_to_rad(deg), torque});
  }
  return out;
}

std::string serialize_measurements(const std::vector<TorqueMeasurement>& rows) {
  std::string out(kHeader);
  out += '\n';
  for (const TorqueMeasurement& m : rows) {
    out += detail::format_sig(units::pa_to_kpa(m.pressure)) + ',' +
           detail::format_sig(units::rad_to_deg(m.bend_angle)) + ',' + detail::format_sig(m.torque) +
           '\n';
  }
  return out;
}

LinearityReport pressure_linearity(const std::vector<TorqueMeasurement>& rows,
                                   const ActuatorGeometry* geom) {
  LinearityReport report;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].bend_angle < rows[b].bend_angle;
  });

  std::size_t start = 0;
  while (start < order.size()) {
    const double anchor = rows[order[start]].bend_angle;
    std::size_t end = start + 1;
    while (end < order.size() && rows[order[end]].bend_angle - anchor <= kAngleGroupTolerance) ++end;

    const auto count = static_cast<double>(end - start);
    double mean_p = 0.0, mean_t = 0.0, mean_angle = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      mean_p += rows[order[k]].pressure;
      mean_t += rows[order[k]].torque;
      mean_angle += rows[order[k]].bend_angle;
    }
    mean_p /= count;
    mean_t /= count;
    mean_angle /= count;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      const double dx = rows[order[k]].pressure - mean_p;
      const double dy = rows[order[k]].torque - mean_t;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    // Fewer than two distinct pressures leaves the slope undetermined.
    const double p_scale = std::max(std::fabs(mean_p), 1.0);
    if (!(sxx > 1e-18 * p_scale * p_scale * count)) {
      report.warnings.push_back("angle group at " +
                                detail::format_sig(units::rad_to_deg(mean_angle)) +
                                " deg skipped: needs at least two distinct pressures");
      start = end;
      continue;
    }

    LinearFit fit;
    fit.bend_angle = mean_angle;
    fit.points = end - start;
    fit.slope = sxy / sxx;
    fit.intercept = mean_t - fit.slope * mean_p;
    double ss_res = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      const TorqueMeasurement& m = rows[order[k]];
      const double r = m.torque - (fit.intercept + fit.slope * m.pressure);
      ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    if (geom) {
      // Torque per unit pressure at the group angle.
      fit.model_slope = exosuit_torque(*geom, OperatingPoint(1.0, mean_angle));
    }
    report.fits.push_back(fit);
    start = end;
  }
  return report;
}

ValidationReport validate(const std::vector<TorqueMeasurement>& rows, const ActuatorGeometry& geom,
                          const LegGeometry& leg) {
  ValidationReport report;
  const int n_max = max_actuator_count(leg, geom.diameter());
  if (geom.count() > n_max) {
    report.warnings.push_back("as-built count " + std::to_string(geom.count()) +
                              " exceeds the packing limit " + std::to_string(n_max));
  }
  for (const TorqueMeasurement& m : rows) {
    PointError point{m, exosuit_torque(geom, OperatingPoint(m.pressure, m.bend_angle)), 0.0, false};
    if (m.torque == 0.0) {
      point.error = point.predicted;
      point.absolute = point.predicted != 0.0;
      if (point.absolute) {
        report.warnings.push_back("zero measured torque at " +
                                  detail::format_sig(units::pa_to_kpa(m.pressure)) + " kPa, " +
                                  detail::format_sig(units::rad_to_deg(m.bend_angle)) +
                                  " deg: absolute error reported");
      }
    } else {
      point.error = (point.predicted - m.torque) / m.torque;
      report.max_error = std::max(report.max_error, std::fabs(point.error));
    }
    report.points.push_back(point);
  }
  report.linearity = pressure_linearity(rows, &geom);
  return report;
}

}  // namespace exo
