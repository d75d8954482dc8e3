#include "exo/report.hpp"

#include <cmath>
#include <cstdio>

#include "exo/errors.hpp"
#include "exo/units.hpp"
#include "text_util.hpp"

namespace exo {

namespace {

using detail::format_fixed;
using detail::format_sig;

constexpr int kLabelWidth = 15;

std::string row(std::string_view label, std::string_view value) {
  std::string out(label);
  if (out.size() < kLabelWidth) out.resize(kLabelWidth, ' ');
  else out += ' ';
  out += value;
  out += '\n';
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string describe_point(const DesignPoint& p) {
  return "d=" + format_sig(units::m_to_mm(p.diameter())) + "mm n=" + std::to_string(p.count());
}

std::string describe_requirement(const TorqueRequirement& r) {
  return format_sig(units::rad_to_deg(r.bend_angle)) + "deg/" +
         format_sig(units::pa_to_kpa(r.pressure)) + "kPa>=" + format_sig(r.min_torque) + "Nm";
}

Json point_json(const DesignPoint& p) {
  return {{"d_mm", units::m_to_mm(p.diameter())}, {"n", p.count()}};
}

Json requirement_json(const TorqueRequirement& r) {
  return {{"theta_deg", units::rad_to_deg(r.bend_angle)},
          {"p_kpa", units::pa_to_kpa(r.pressure)},
          {"min_torque_Nm", r.min_torque}};
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(0, std::string("missing key '") + key + "'");
  return j.at(key).get<T>();
}

DesignPoint point_from_json(const Json& j) {
  return DesignPoint::make(required<int>(j, "n"), units::mm_to_m(required<double>(j, "d_mm")));
}

std::string transfer_table(const TransferReport& r) {
  std::string out;
  out += row("baseline", describe_point(r.baseline));
  out += row("candidate", describe_point(r.candidate));
  out += row("at", "theta=" + format_sig(units::rad_to_deg(r.at.bend_angle())) + "deg p=" +
                       format_sig(units::pa_to_kpa(r.at.pressure())) + "kPa");
  out += row("torque_change", format_percent(r.torque_change));
  out += row("stress_change", format_percent(r.stress_coverage_change));
  out += row("profile_change", format_percent(r.profile_change));
  for (const IndicatorCheck& c : r.feasibility) {
    out += row("feasible", describe_requirement(c.requirement) + ": " + (c.met ? "yes" : "no") +
                               " (" + format_fixed(c.torque, 3) + " Nm)");
  }
  for (const std::string& note : r.notes) out += row("note", note);
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "json") return ReportFormat::Json;
  throw UsageError("unknown report format '" + std::string(name) + "' (expected table or json)");
}

std::string format_percent(double fraction) {
  const double pct = fraction * 100.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f%%", std::fabs(pct) < 0.005 ? 0.0 : pct);
  return buf;
}

Json to_json(const TransferReport& r) {
  Json feasible = Json::array();
  for (const IndicatorCheck& c : r.feasibility) {
    Json item = requirement_json(c.requirement);
    item["torque_Nm"] = c.torque;
    item["met"] = c.met;
    feasible.push_back(std::move(item));
  }
  return {{"baseline", point_json(r.baseline)},
          {"candidate", point_json(r.candidate)},
          {"at",
           {{"theta_deg", units::rad_to_deg(r.at.bend_angle())},
            {"p_kpa", units::pa_to_kpa(r.at.pressure())}}},
          {"torque_change_pct", r.torque_change * 100.0},
          {"stress_change_pct", r.stress_coverage_change * 100.0},
          {"profile_change_pct", r.profile_change * 100.0},
          {"feasible", std::move(feasible)},
          {"notes", r.notes}};
}

TransferReport transfer_report_from_json(const Json& j) {
  try {
    const Json& at = j.at("at");
    TransferReport r{point_from_json(j.at("baseline")),
                     point_from_json(j.at("candidate")),
                     OperatingPoint(units::kpa_to_pa(required<double>(at, "p_kpa")),
                                    units::deg_to_rad(required<double>(at, "theta_deg"))),
                     required<double>(j, "torque_change_pct") / 100.0,
                     required<double>(j, "stress_change_pct") / 100.0,
                     required<double>(j, "profile_change_pct") / 100.0,
                     {},
                     required<std::vector<std::string>>(j, "notes")};
    for (const Json& item : j.at("feasible")) {
      TorqueRequirement req{units::deg_to_rad(required<double>(item, "theta_deg")),
                            units::kpa_to_pa(required<double>(item, "p_kpa")),
                            required<double>(item, "min_torque_Nm")};
      r.feasibility.push_back({req, required<double>(item, "torque_Nm"), required<bool>(item, "met")});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed transfer report: ") + e.what());
  }
}

Json to_json(const OptimizationResult& result, const DesignIndicators& indicators) {
  Json reqs = Json::array();
  for (const TorqueRequirement& r : indicators.requirements()) reqs.push_back(requirement_json(r));
  Json j = {{"feasible", result.feasible}, {"requirements", std::move(reqs)},
            {"evaluated", result.evaluated}};
  if (result.point) j["selected"] = point_json(*result.point);
  if (result.report) j["report"] = to_json(*result.report);
  if (!result.feasible) {
    Json binding = Json::array();
    for (std::size_t r : result.binding) {
      binding.push_back(requirement_json(indicators.requirements().at(r)));
    }
    j["binding"] = std::move(binding);
  }
  return j;
}

Json to_json(const ValidationReport& report) {
  Json points = Json::array();
  for (const PointError& p : report.points) {
    points.push_back({{"pressure_kpa", units::pa_to_kpa(p.measured.pressure)},
                      {"angle_deg", units::rad_to_deg(p.measured.bend_angle)},
                      {"measured_Nm", p.measured.torque},
                      {"predicted_Nm", p.predicted},
                      {p.absolute ? "abs_error_Nm" : "rel_error", p.error}});
  }
  Json fits = Json::array();
  for (const LinearFit& f : report.linearity.fits) {
    Json fit = {{"angle_deg", units::rad_to_deg(f.bend_angle)},
                {"points", f.points},
                {"slope_Nm_per_kpa", f.slope * 1e3},
                {"intercept_Nm", f.intercept},
                {"r_squared", f.r_squared}};
    if (f.model_slope) fit["model_slope_Nm_per_kpa"] = *f.model_slope * 1e3;
    fits.push_back(std::move(fit));
  }
  Json warnings = report.warnings;
  for (const auto& w : report.linearity.warnings) warnings.push_back(w);
  return {{"points", std::move(points)},
          {"max_error", report.max_error},
          {"fits", std::move(fits)},
          {"warnings", std::move(warnings)}};
}

Json to_json(const emg::AssistanceReport& report) {
  Json channels = Json::array();
  for (const emg::ChannelReduction& c : report.channels) {
    Json ch = {{"label", c.label}, {"baseline_rms_V", c.baseline_rms}, {"assisted_rms_V", c.assisted_rms}};
    ch["reduction_pct"] = c.reduction ? Json(*c.reduction * 100.0) : Json(nullptr);
    channels.push_back(std::move(ch));
  }
  return {{"trim_s", report.trim_seconds}, {"channels", std::move(channels)},
          {"warnings", report.warnings}};
}

std::string render_report(const TransferReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
  return transfer_table(report);
}

std::string render_report(const OptimizationResult& result, const DesignIndicators& indicators,
                          ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(result, indicators).dump(2) + "\n";
  std::string out;
  for (const TorqueRequirement& r : indicators.requirements()) {
    out += row("requirement", describe_requirement(r));
  }
  out += row("evaluated", std::to_string(result.evaluated) + " lattice points");
  if (!result.feasible) {
    out += row("selected", "infeasible");
    for (std::size_t r : result.binding) {
      out += row("binding", describe_requirement(indicators.requirements().at(r)));
    }
    return out;
  }
  out += row("selected", describe_point(*result.point));
  if (result.report) out += transfer_table(*result.report);
  return out;
}

std::string render_report(const ValidationReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
  std::string out = pad("pressure_kpa", 12) + pad("angle_deg", 11) + pad("measured_Nm", 13) +
                    pad("predicted_Nm", 14) + pad("error", 12) + "\n";
  for (const PointError& p : report.points) {
    out += pad(format_fixed(units::pa_to_kpa(p.measured.pressure), 1), 12) +
           pad(format_fixed(units::rad_to_deg(p.measured.bend_angle), 1), 11) +
           pad(format_fixed(p.measured.torque, 3), 13) + pad(format_fixed(p.predicted, 3), 14) +
           pad(p.absolute ? format_fixed(p.error, 3) + "Nm" : format_percent(p.error), 12) + "\n";
  }
  if (report.points.empty()) return out;
  out += row("max_error", format_percent(report.max_error));
  for (const LinearFit& f : report.linearity.fits) {
    std::string text = "angle=" + format_sig(units::rad_to_deg(f.bend_angle)) + "deg slope=" +
                       format_sig(f.slope * 1e3) + "Nm/kPa r2=" + format_fixed(f.r_squared, 4);
    if (f.model_slope) text += " model=" + format_sig(*f.model_slope * 1e3) + "Nm/kPa";
    out += row("fit", text);
  }
  for (const auto& w : report.warnings) out += row("warning", w);
  for (const auto& w : report.linearity.warnings) out += row("warning", w);
  return out;
}

std::string render_report(const emg::AssistanceReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
  std::string out = std::string("channel") + std::string(13, ' ') + pad("baseline_rms_V", 16) +
                    pad("assisted_rms_V", 16) + pad("reduction", 12) + "\n";
  for (const emg::ChannelReduction& c : report.channels) {
    std::string label = c.label;
    if (label.size() < 20) label.resize(20, ' ');
    out += label + pad(format_sig(c.baseline_rms), 16) + pad(format_sig(c.assisted_rms), 16) +
           pad(c.reduction ? format_fixed(*c.reduction * 100.0, 1) + "%" : "undefined", 12) + "\n";
  }
  for (const auto& w : report.warnings) out += row("warning", w);
  return out;
}

}  // namespace exo
