#include "exo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "exo/actuator_model.hpp"
#include "exo/design_graph.hpp"
#include "exo/emg.hpp"
#include "exo/errors.hpp"
#include "exo/experiment_io.hpp"
#include "exo/report.hpp"
#include "exo/units.hpp"
#include "text_util.hpp"

namespace exo::cli {

namespace {

using units::deg_to_rad;
using units::kpa_to_pa;
using units::mm_to_m;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("cannot write '" + out_path + "'");
  file << text;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Default contour levels in N m; the graphs carry no canonical set.
const std::vector<double> kDefaultLevels = {1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0};

struct TorqueArgs {
  int n = 0;
  double d_mm = 0.0;
  double b_mm = 0.0;
  double p_kpa = 0.0;
  double theta_deg = 0.0;
  std::string format = "table";
};

struct GraphArgs {
  double theta_deg = 90.0;
  double p_kpa = 90.0;
  double leg_mm = 120.0;
  double d_min_mm = 10.0;
  double d_max_mm = 60.0;
  double d_step_mm = 0.5;
  int n_min = 1;
  int n_max = 12;
  std::vector<double> levels;
  std::string format = "csv";
  std::string out;
  int jobs = 1;
};

struct TransferArgs {
  double leg_mm = 120.0;
  std::vector<std::string> reqs;
  double d_min_mm = 10.0;
  double d_max_mm = 60.0;
  double d_step_mm = 1.0;
  double baseline_d_mm = 38.0;
  int baseline_n = 2;
  double candidate_d_mm = 0.0;
  int candidate_n = 0;
  double at_theta_deg = 90.0;
  double at_p_kpa = 90.0;
  std::string format = "table";
  std::string out;
  int jobs = 1;
};

struct ValidateArgs {
  std::string in;
  int n = 7;
  double d_mm = 0.0;
  double leg_mm = 120.0;
  std::string format = "table";
  std::string out;
};

struct EmgArgs {
  std::string baseline;
  std::string assisted;
  double trim_s = emg::kDefaultTrimSeconds;
  double low_hz = 10.0;
  double high_hz = 400.0;
  double fs_hz = 0.0;
  std::string format = "table";
  std::string out;
};

int run_torque(const TorqueArgs& a, const CLI::App& cmd, std::ostream& out) {
  const ActuatorGeometry geom = cmd.count("--flat-width-mm") > 0
                                    ? ActuatorGeometry::from_flat_width(a.n, mm_to_m(a.b_mm))
                                    : ActuatorGeometry::from_diameter(a.n, mm_to_m(a.d_mm));
  const double torque = exosuit_torque(geom, OperatingPoint(kpa_to_pa(a.p_kpa), deg_to_rad(a.theta_deg)));
  if (parse_report_format(a.format) == ReportFormat::Json) {
    Json j = {{"n", geom.count()},
              {"d_mm", units::m_to_mm(geom.diameter())},
              {"p_kpa", a.p_kpa},
              {"theta_deg", a.theta_deg},
              {"torque_Nm", torque}};
    out << j.dump(2) << "\n";
  } else {
    out << detail::format_fixed(torque, 3) << " N·m\n";
  }
  return kExitOk;
}

int run_graph(const GraphArgs& a, std::ostream& out) {
  const GridFormat format = parse_grid_format(a.format);
  const GraphSpec spec{deg_to_rad(a.theta_deg),
                       kpa_to_pa(a.p_kpa),
                       {mm_to_m(a.d_min_mm), mm_to_m(a.d_max_mm), mm_to_m(a.d_step_mm)},
                       {a.n_min, a.n_max},
                       LegGeometry(mm_to_m(a.leg_mm))};
  const DesignGrid grid = generate_grid(spec, a.jobs);
  const ContourSet contours = iso_contour(grid, a.levels.empty() ? kDefaultLevels : a.levels);
  emit(export_grid(grid, contours, format), a.out, out);
  return kExitOk;
}

int run_transfer(const TransferArgs& a, const CLI::App& cmd, std::ostream& out) {
  const ReportFormat format = parse_report_format(a.format);
  const LegGeometry leg(mm_to_m(a.leg_mm));
  const DesignPoint baseline = DesignPoint::make(a.baseline_n, mm_to_m(a.baseline_d_mm));

  std::vector<TorqueRequirement> reqs;
  for (const std::string& r : a.reqs) reqs.push_back(parse_requirement(r));

  const bool compare_mode = cmd.count("--candidate-d-mm") > 0 || cmd.count("--candidate-n") > 0;
  if (compare_mode) {
    if (cmd.count("--candidate-d-mm") == 0 || cmd.count("--candidate-n") == 0) {
      throw UsageError("--candidate-d-mm and --candidate-n must be given together");
    }
    const DesignPoint candidate = DesignPoint::make(a.candidate_n, mm_to_m(a.candidate_d_mm));
    const OperatingPoint at(kpa_to_pa(a.at_p_kpa), deg_to_rad(a.at_theta_deg));
    std::optional<DesignIndicators> indicators;
    if (!reqs.empty()) indicators.emplace(reqs);
    const TransferReport report =
        compare(baseline, candidate, leg, at, indicators ? &*indicators : nullptr);
    emit(render_report(report, format), a.out, out);
    return kExitOk;
  }

  if (reqs.empty()) throw UsageError("transfer search needs at least one --req theta_deg:p_kpa:Nm");
  const DesignIndicators indicators(reqs);
  const OptimizationResult result =
      optimize(indicators, leg, {mm_to_m(a.d_min_mm), mm_to_m(a.d_max_mm), mm_to_m(a.d_step_mm)},
               baseline, a.jobs);
  emit(render_report(result, indicators, format), a.out, out);
  return result.feasible ? kExitOk : kExitDomain;
}

int run_validate(const ValidateArgs& a, std::ostream& out) {
  const ReportFormat format = parse_report_format(a.format);
  const auto rows = parse_measurements(read_file(a.in));
  const ValidationReport report =
      validate(rows, ActuatorGeometry::from_diameter(a.n, mm_to_m(a.d_mm)), LegGeometry(mm_to_m(a.leg_mm)));
  emit(render_report(report, format), a.out, out);
  return kExitOk;
}

int run_emg(const EmgArgs& a, const CLI::App& cmd, std::ostream& out) {
  const ReportFormat format = parse_report_format(a.format);
  const emg::EmgRecording baseline = emg::parse_emg_csv(read_file(a.baseline));
  const emg::EmgRecording assisted = emg::parse_emg_csv(read_file(a.assisted));
  if (cmd.count("--fs-hz") > 0 && std::fabs(baseline.sample_rate() - a.fs_hz) > 1e-6 * a.fs_hz) {
    throw ValidationError("time column implies " + detail::format_sig(baseline.sample_rate(), 9) +
                          " Hz, but --fs-hz is " + detail::format_sig(a.fs_hz, 9));
  }
  const emg::BandpassSpec spec = emg::design_bandpass(baseline.sample_rate(), a.low_hz, a.high_hz);
  const emg::AssistanceReport report = emg::assistance_reduction(baseline, assisted, spec, a.trim_s);
  emit(render_report(report, format), a.out, out);
  return kExitOk;
}

}  // namespace

TorqueRequirement parse_requirement(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) {
    throw UsageError("requirement '" + std::string(text) + "' must be theta_deg:p_kpa:min_Nm");
  }
  try {
    return {deg_to_rad(detail::parse_double(parts[0], 0, "theta_deg")),
            kpa_to_pa(detail::parse_double(parts[1], 0, "p_kpa")),
            detail::parse_double(parts[2], 0, "min_Nm")};
  } catch (const ParseError&) {
    throw UsageError("requirement '" + std::string(text) + "' must be theta_deg:p_kpa:min_Nm");
  }
}

std::vector<std::string> merge_config(const std::vector<std::string>& args, std::string_view config) {
  std::vector<std::string> merged = args;
  const auto lines = detail::lines(config);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string_view line = detail::trim(lines[k]);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(k + 1) + ": expected key=value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty() || key == "config") {
      throw UsageError("config line " + std::to_string(k + 1) + ": invalid key");
    }
    if (has_flag(args, "--" + key)) continue;
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  return merged;
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    std::optional<std::string> config_path;
    for (std::size_t k = 0; k < raw_args.size(); ++k) {
      const std::string& a = raw_args[k];
      if (a == "--config") {
        if (k + 1 >= raw_args.size()) throw UsageError("--config needs a file");
        config_path = raw_args[++k];
      } else if (a.rfind("--config=", 0) == 0) {
        config_path = a.substr(9);
      } else {
        args.push_back(a);
      }
    }
    if (config_path) args = merge_config(args, read_file(*config_path));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  CLI::App app{"Design calculator for fabric pneumatic knee exosuits", "exo_design"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  TorqueArgs ta;
  auto* torque = app.add_subcommand("torque", "Exosuit torque at one operating point");
  torque->add_option("--n", ta.n, "Actuator count")->required()->check(CLI::PositiveNumber);
  auto* d_opt = torque->add_option("--d-mm", ta.d_mm, "Inflated actuator diameter [mm]");
  auto* b_opt = torque->add_option("--flat-width-mm", ta.b_mm, "Flat actuator width [mm]");
  d_opt->excludes(b_opt);
  torque->add_option("--p-kpa", ta.p_kpa, "Gauge pressure [kPa]")->required();
  torque->add_option("--theta-deg", ta.theta_deg, "Bend angle [deg]")->required();
  torque->add_option("--format", ta.format, "table or json");

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "Design calculation graph over (d, n)");
  graph->add_option("--theta-deg", ga.theta_deg, "Fixed bend angle [deg]");
  graph->add_option("--p-kpa", ga.p_kpa, "Fixed pressure [kPa]");
  graph->add_option("--D-mm", ga.leg_mm, "Leg diameter [mm]");
  graph->add_option("--d-min-mm", ga.d_min_mm, "Smallest diameter [mm]");
  graph->add_option("--d-max-mm", ga.d_max_mm, "Largest diameter [mm]");
  graph->add_option("--d-step-mm", ga.d_step_mm, "Diameter step [mm]");
  graph->add_option("--n-min", ga.n_min, "Smallest count");
  graph->add_option("--n-max", ga.n_max, "Largest count");
  graph->add_option("--level-Nm", ga.levels, "Contour level [N m], repeatable");
  graph->add_option("--format", ga.format, "csv, json or svg");
  graph->add_option("--out", ga.out, "Output file (default stdout)");
  graph->add_option("--jobs", ga.jobs, "Worker threads")->check(CLI::PositiveNumber);

  TransferArgs xa;
  auto* transfer = app.add_subcommand("transfer", "Volume-transfer search or comparison");
  transfer->add_option("--D-mm", xa.leg_mm, "Leg diameter [mm]");
  transfer->add_option("--req", xa.reqs, "Requirement theta_deg:p_kpa:min_Nm, repeatable");
  auto* dmin = transfer->add_option("--d-min-mm", xa.d_min_mm, "Search: smallest diameter [mm]");
  auto* dmax = transfer->add_option("--d-max-mm", xa.d_max_mm, "Search: largest diameter [mm]");
  auto* dstep = transfer->add_option("--d-step-mm", xa.d_step_mm, "Search: diameter step [mm]");
  transfer->add_option("--baseline-d-mm", xa.baseline_d_mm, "Baseline diameter [mm]");
  transfer->add_option("--baseline-n", xa.baseline_n, "Baseline count");
  auto* cd = transfer->add_option("--candidate-d-mm", xa.candidate_d_mm, "Compare: candidate diameter [mm]");
  auto* cn = transfer->add_option("--candidate-n", xa.candidate_n, "Compare: candidate count");
  auto* at_t = transfer->add_option("--at-theta-deg", xa.at_theta_deg, "Compare: bend angle [deg]");
  auto* at_p = transfer->add_option("--at-p-kpa", xa.at_p_kpa, "Compare: pressure [kPa]");
  for (auto* search : {dmin, dmax, dstep}) {
    search->excludes(cd);
    search->excludes(cn);
  }
  at_t->needs(cd);
  at_p->needs(cd);
  transfer->add_option("--format", xa.format, "table or json");
  transfer->add_option("--out", xa.out, "Output file (default stdout)");
  transfer->add_option("--jobs", xa.jobs, "Worker threads")->check(CLI::PositiveNumber);

  ValidateArgs va;
  auto* val = app.add_subcommand("validate", "Compare bench torques with the model");
  val->add_option("--in", va.in, "CSV pressure_kpa,angle_deg,torque_Nm")->required();
  val->add_option("--n", va.n, "Actuator count");
  val->add_option("--d-mm", va.d_mm, "As-built (measured) diameter [mm]")->required();
  val->add_option("--D-mm", va.leg_mm, "Leg diameter [mm]");
  val->add_option("--format", va.format, "table or json");
  val->add_option("--out", va.out, "Output file (default stdout)");

  EmgArgs ea;
  auto* emg_cmd = app.add_subcommand("emg", "sEMG activation reduction with assistance");
  emg_cmd->add_option("--baseline", ea.baseline, "CSV t_s,<muscle>,... without assistance")->required();
  emg_cmd->add_option("--assisted", ea.assisted, "CSV t_s,<muscle>,... with assistance")->required();
  emg_cmd->add_option("--trim-s", ea.trim_s, "Transient trim at each edge [s]");
  emg_cmd->add_option("--low-hz", ea.low_hz, "Band-pass low edge [Hz]");
  emg_cmd->add_option("--high-hz", ea.high_hz, "Band-pass high edge [Hz]");
  emg_cmd->add_option("--fs-hz", ea.fs_hz, "Expected sample rate [Hz]");
  emg_cmd->add_option("--format", ea.format, "table or json");
  emg_cmd->add_option("--out", ea.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*torque) {
      if (torque->count("--d-mm") == 0 && torque->count("--flat-width-mm") == 0) {
        throw UsageError("torque needs --d-mm or --flat-width-mm");
      }
      return run_torque(ta, *torque, out);
    }
    if (*graph) return run_graph(ga, out);
    if (*transfer) return run_transfer(xa, *transfer, out);
    if (*val) return run_validate(va, out);
    if (*emg_cmd) return run_emg(ea, *emg_cmd, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace exo::cli
