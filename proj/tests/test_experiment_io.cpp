#include <doctest.h>

#include <cmath>

#include "exo/errors.hpp"
#include "exo/experiment_io.hpp"
#include "exo/units.hpp"

using namespace exo;
using units::deg_to_rad;
using units::mm_to_m;

namespace {

const LegGeometry kLeg(mm_to_m(120.0));
const ActuatorGeometry kAsBuilt = ActuatorGeometry::from_diameter(7, mm_to_m(26.0));

std::vector<TorqueMeasurement> synthetic(const std::vector<double>& angles_deg) {
  std::vector<TorqueMeasurement> rows;
  for (double deg : angles_deg) {
    for (double kpa = 10; kpa <= 90; kpa += 10) {
      const OperatingPoint op(units::kpa_to_pa(kpa), deg_to_rad(deg));
      rows.push_back({op.pressure(), op.bend_angle(), exosuit_torque(kAsBuilt, op)});
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("parse measurements") {
  const auto rows = parse_measurements("pressure_kpa,angle_deg,torque_Nm\n90,90,7.6\n90,20,2.2\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].pressure == 90000.0);
  CHECK(rows[0].bend_angle == doctest::Approx(units::kPi / 2));
  CHECK(rows[0].torque == 7.6);
  CHECK(rows[1].bend_angle == doctest::Approx(deg_to_rad(20.0)));
  CHECK(rows[1].torque == 2.2);

  CHECK(parse_measurements("").empty());
  CHECK(parse_measurements("pressure_kpa,angle_deg,torque_Nm\n").empty());
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_measurements("pressure_kpa,angle_deg,torque_Nm\n90,90,7.6\n90,abc,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_measurements("p,a,t\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_measurements("pressure_kpa,angle_deg,torque_Nm\n1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_measurements("pressure_kpa,angle_deg,torque_Nm\n1,2,3,4\n"), ParseError);
  CHECK_THROWS_AS(parse_measurements("pressure_kpa,angle_deg,torque_Nm\n-1,2,3\n"), ValidationError);
  CHECK_THROWS_AS(parse_measurements("pressure_kpa,angle_deg,torque_Nm\n1,180,3\n"), ValidationError);
}

TEST_CASE("serialize then parse preserves values") {
  const auto rows = synthetic({20, 45, 90});
  const auto back = parse_measurements(serialize_measurements(rows));
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].pressure == doctest::Approx(rows[k].pressure).epsilon(5e-6));
    CHECK(back[k].bend_angle == doctest::Approx(rows[k].bend_angle).epsilon(5e-6));
    CHECK(back[k].torque == doctest::Approx(rows[k].torque).epsilon(5e-6));
  }
  // Normalized form is a fixed point.
  CHECK(serialize_measurements(back) == serialize_measurements(rows));
}

TEST_CASE("validate the peak measurement") {
  const auto rows = parse_measurements("pressure_kpa,angle_deg,torque_Nm\n90,90,7.6\n");
  const ValidationReport report = validate(rows, kAsBuilt, kLeg);
  REQUIRE(report.points.size() == 1);
  CHECK(report.points[0].predicted == doctest::Approx(8.696619615520335).epsilon(1e-12));
  CHECK(report.points[0].error == doctest::Approx(0.1442920546737283).epsilon(1e-9));
  CHECK(report.max_error == report.points[0].error);
  // A single pressure cannot be fitted.
  CHECK(report.linearity.fits.empty());
  CHECK(report.linearity.warnings.size() == 1);
}

TEST_CASE("zero-torque rows") {
  const ValidationReport p0 = validate({{0.0, 1.0, 0.0}}, kAsBuilt, kLeg);
  CHECK(p0.points[0].predicted == 0.0);
  CHECK(p0.points[0].error == 0.0);
  CHECK_FALSE(p0.points[0].absolute);

  const ValidationReport flagged = validate({{5e4, 1.0, 0.0}, {5e4, 1.0, 1.0}}, kAsBuilt, kLeg);
  CHECK(flagged.points[0].absolute);
  CHECK(flagged.points[0].error == flagged.points[0].predicted);
  CHECK(flagged.max_error == doctest::Approx(std::fabs(flagged.points[1].error)));
  CHECK(!flagged.warnings.empty());
}

TEST_CASE("self-consistency on model-generated data") {
  const auto rows = synthetic({20, 45, 60, 90});
  const ValidationReport report = validate(rows, kAsBuilt, kLeg);
  CHECK(report.max_error < 1e-15);
  REQUIRE(report.linearity.fits.size() == 4);
  for (const LinearFit& fit : report.linearity.fits) {
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-9));
    REQUIRE(fit.model_slope);
    CHECK(fit.slope == doctest::Approx(*fit.model_slope).epsilon(1e-12));
  }
  // The 90 deg slope equals pi n d^3 / (8 cos^2(45 deg)).
  CHECK(report.linearity.fits.back().slope == doctest::Approx(9.662910683911482e-05).epsilon(1e-10));
  for (std::size_t k = 1; k < report.linearity.fits.size(); ++k) {
    CHECK(report.linearity.fits[k].slope > report.linearity.fits[k - 1].slope);
  }
}

TEST_CASE("pressure linearity grouping and degenerate cases") {
  const auto flat = pressure_linearity({{1e4, 1.0, 2.0}, {5e4, 1.0, 2.0}, {9e4, 1.0, 2.0}});
  REQUIRE(flat.fits.size() == 1);
  CHECK(flat.fits[0].slope == 0.0);
  CHECK_FALSE(flat.fits[0].model_slope);

  // 0.3 deg apart: one group. 1 deg apart: two groups.
  const double a = deg_to_rad(45.0);
  CHECK(pressure_linearity({{1e4, a, 1}, {2e4, a + deg_to_rad(0.3), 2}}).fits.size() == 1);
  const auto split = pressure_linearity({{1e4, a, 1}, {2e4, a, 2}, {1e4, a + deg_to_rad(1), 1}, {2e4, a + deg_to_rad(1), 3}});
  CHECK(split.fits.size() == 2);

  const auto single = pressure_linearity({{1e4, a, 1}, {1e4, a, 1.1}});
  CHECK(single.fits.empty());
  CHECK(single.warnings.size() == 1);
}
