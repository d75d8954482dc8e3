#include <doctest.h>

#include <algorithm>

#include "exo/errors.hpp"
#include "exo/report.hpp"
#include "exo/units.hpp"

using namespace exo;
using units::deg_to_rad;
using units::mm_to_m;

namespace {

const LegGeometry kLeg(mm_to_m(120.0));
const OperatingPoint kPeak(90e3, deg_to_rad(90.0));

TransferReport sample_report() {
  const DesignIndicators ind({{deg_to_rad(90.0), 90e3, 6.0}, {deg_to_rad(20.0), 90e3, 1.0}});
  return compare(DesignPoint::make(2, mm_to_m(38.0)), DesignPoint::make(7, mm_to_m(25.0)), kLeg, kPeak, &ind);
}

}  // namespace

TEST_CASE("transfer report table") {
  const std::string table = render_report(sample_report(), ReportFormat::Table);
  CHECK(table.find("torque_change  -0.34%\n") != std::string::npos);
  CHECK(table.find("stress_change  +149.70%\n") != std::string::npos);
  CHECK(table.find("profile_change -34.21%\n") != std::string::npos);
  CHECK(table.find("baseline       d=38mm n=2\n") != std::string::npos);
  CHECK(table.find("candidate      d=25mm n=7\n") != std::string::npos);
  CHECK(table.find("37.3") != std::string::npos);
}

TEST_CASE("transfer report JSON round trip") {
  const TransferReport r = sample_report();
  const std::string text = render_report(r, ReportFormat::Json);
  const Json j = Json::parse(text);
  // Fixed key order.
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"baseline", "candidate", "at", "torque_change_pct", "stress_change_pct",
                                         "profile_change_pct", "feasible", "notes"});
  CHECK(j["torque_change_pct"].get<double>() == doctest::Approx(-0.336237).epsilon(1e-5));

  const TransferReport back = transfer_report_from_json(j);
  CHECK(back.baseline.count() == r.baseline.count());
  CHECK(back.candidate.diameter() == doctest::Approx(r.candidate.diameter()).epsilon(1e-15));
  CHECK(back.at.bend_angle() == doctest::Approx(r.at.bend_angle()).epsilon(1e-15));
  CHECK(back.at.pressure() == doctest::Approx(r.at.pressure()).epsilon(1e-15));
  CHECK(back.torque_change == doctest::Approx(r.torque_change).epsilon(1e-14));
  CHECK(back.stress_coverage_change == doctest::Approx(r.stress_coverage_change).epsilon(1e-14));
  CHECK(back.profile_change == doctest::Approx(r.profile_change).epsilon(1e-14));
  REQUIRE(back.feasibility.size() == r.feasibility.size());
  for (std::size_t k = 0; k < r.feasibility.size(); ++k) {
    CHECK(back.feasibility[k].met == r.feasibility[k].met);
    CHECK(back.feasibility[k].torque == r.feasibility[k].torque);
    CHECK(back.feasibility[k].requirement.min_torque == r.feasibility[k].requirement.min_torque);
  }
  CHECK(back.notes == r.notes);
  // Re-serializing the parsed report reproduces the bytes.
  CHECK(render_report(back, ReportFormat::Json) == text);

  CHECK_THROWS_AS(transfer_report_from_json(Json::parse("{\"baseline\":{}}")), ParseError);
}

TEST_CASE("validation report rendering") {
  const ValidationReport empty;
  const std::string table = render_report(empty, ReportFormat::Table);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1);
  CHECK(table.find("pressure_kpa") == 0);

  const ValidationReport one = validate({{90e3, deg_to_rad(90.0), 7.6}},
                                        ActuatorGeometry::from_diameter(7, mm_to_m(26.0)), kLeg);
  const std::string t = render_report(one, ReportFormat::Table);
  CHECK(t.find("+14.43%") != std::string::npos);
  const Json j = Json::parse(render_report(one, ReportFormat::Json));
  CHECK(j["max_error"].get<double>() == doctest::Approx(0.14429205).epsilon(1e-6));
  CHECK(j["points"][0]["predicted_Nm"].get<double>() == doctest::Approx(8.6966196));
}

TEST_CASE("optimization and EMG rendering") {
  const DesignIndicators ind({{deg_to_rad(90.0), 90e3, 6.0}});
  const OptimizationResult result =
      optimize(ind, kLeg, {mm_to_m(10), mm_to_m(60), mm_to_m(1)}, DesignPoint::make(2, mm_to_m(38.0)));
  const std::string table = render_report(result, ind, ReportFormat::Table);
  CHECK(table.find("selected       d=") != std::string::npos);
  const Json j = Json::parse(render_report(result, ind, ReportFormat::Json));
  CHECK(j["feasible"].get<bool>());
  CHECK(j.contains("report"));

  const DesignIndicators impossible({{deg_to_rad(90.0), 90e3, 1e5}});
  const OptimizationResult none =
      optimize(impossible, kLeg, {mm_to_m(10), mm_to_m(60), mm_to_m(1)}, DesignPoint::make(2, mm_to_m(38.0)));
  CHECK(render_report(none, impossible, ReportFormat::Table).find("infeasible") != std::string::npos);
  CHECK(Json::parse(render_report(none, impossible, ReportFormat::Json))["binding"].size() == 1);

  emg::AssistanceReport emg_report{0.5, {{"rf", 2.0, 0.408, 0.796}, {"vm", 0.0, 1.0, std::nullopt}}, {}};
  const std::string et = render_report(emg_report, ReportFormat::Table);
  CHECK(et.find("79.6%") != std::string::npos);
  CHECK(et.find("undefined") != std::string::npos);
  const Json ej = Json::parse(render_report(emg_report, ReportFormat::Json));
  CHECK(ej["channels"][1]["reduction_pct"].is_null());

  CHECK_THROWS_AS(parse_report_format("xml"), UsageError);
  CHECK(format_percent(-0.0033623) == "-0.34%");
  CHECK(format_percent(0.0) == "+0.00%");
}
