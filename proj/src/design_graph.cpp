#include "exo/design_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "exo/errors.hpp"
#include "exo/units.hpp"
#include "text_util.hpp"

namespace exo {

std::vector<double> DiameterRange::samples() const {
  std::vector<double> out;
  const double span = (max - min) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(min + static_cast<double>(i) * step);
  return out;
}

GraphSpec GraphSpec::defaults(double fixed_angle, double fixed_pressure) {
  return GraphSpec{fixed_angle,
                   fixed_pressure,
                   {units::mm_to_m(10.0), units::mm_to_m(60.0), units::mm_to_m(0.5)},
                   {1, 12},
                   LegGeometry(units::mm_to_m(120.0))};
}

void GraphSpec::validate() const {
  if (!(d_range.step > 0.0) || !std::isfinite(d_range.step)) {
    throw SpecError("diameter step must be positive");
  }
  if (!(d_range.min > 0.0) || !(d_range.min < d_range.max) || !std::isfinite(d_range.max)) {
    throw SpecError("diameter range must satisfy 0 < min < max");
  }
  if (n_range.min < 1 || !(n_range.min < n_range.max)) {
    throw SpecError("count range must satisfy 1 <= min < max");
  }
  // Throws DomainError for invalid angle or pressure.
  OperatingPoint(fixed_pressure, fixed_angle);
}

DesignGrid::DesignGrid(GraphSpec spec, std::vector<double> diameters, std::vector<double> torques,
                       std::vector<PackingLimit> n_max_line)
    : spec_(std::move(spec)),
      diameters_(std::move(diameters)),
      torques_(std::move(torques)),
      n_max_line_(std::move(n_max_line)) {
  if (torques_.size() != diameters_.size() * n_count()) {
    throw SpecError("torque matrix size does not match the lattice");
  }
}

double DesignGrid::min_torque() const { return *std::min_element(torques_.begin(), torques_.end()); }
double DesignGrid::max_torque() const { return *std::max_element(torques_.begin(), torques_.end()); }

DesignGrid generate_grid(const GraphSpec& spec, int jobs) {
  spec.validate();
  std::vector<double> diameters = spec.d_range.samples();
  const OperatingPoint op(spec.fixed_pressure, spec.fixed_angle);
  const std::size_t nd = diameters.size();
  const auto nn = static_cast<std::size_t>(spec.n_range.max - spec.n_range.min + 1);

  std::vector<double> torques(nd * nn);
  std::vector<PackingLimit> line(nd);

  // Each row writes only its own slots, so the layout is independent of the
  // thread partition.
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double d = diameters[i];
      for (std::size_t j = 0; j < nn; ++j) {
        const int n = spec.n_range.min + static_cast<int>(j);
        torques[i * nn + j] = exosuit_torque(ActuatorGeometry::from_diameter(n, d), op);
      }
      line[i] = {d, max_actuator_count(spec.leg, d)};
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1 || nd < 2) {
    fill_rows(0, nd);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (nd + workers - 1) / workers;
    for (std::size_t begin = 0; begin < nd; begin += chunk) {
      pool.emplace_back(fill_rows, begin, std::min(nd, begin + chunk));
    }
  }
  return DesignGrid(spec, std::move(diameters), std::move(torques), std::move(line));
}

namespace {

// Cell corners: c0 = (i, j), c1 = (i+1, j), c2 = (i+1, j+1), c3 = (i, j+1).
// Cell edges:   e0 = c0-c1, e1 = c1-c2, e2 = c3-c2, e3 = c0-c3.
struct Segment {
  std::size_t edge_a;
  std::size_t edge_b;
};

class MarchingSquares {
 public:
  MarchingSquares(const DesignGrid& grid, double level) : grid_(grid), level_(level) {}

  std::vector<Polyline> run() {
    const std::size_t nd = grid_.d_count();
    const std::size_t nn = grid_.n_count();
    for (std::size_t i = 0; i + 1 < nd; ++i) {
      for (std::size_t j = 0; j + 1 < nn; ++j) march_cell(i, j);
    }
    return stitch();
  }

 private:
  // Edge ids: "d-edges" from (i, j) to (i+1, j) occupy [0, nd*nn); "n-edges"
  // from (i, j) to (i, j+1) occupy [nd*nn, 2*nd*nn).
  std::size_t d_edge(std::size_t i, std::size_t j) const { return i * grid_.n_count() + j; }
  std::size_t n_edge(std::size_t i, std::size_t j) const {
    return grid_.d_count() * grid_.n_count() + i * grid_.n_count() + j;
  }

  bool inside(std::size_t i, std::size_t j) const { return grid_.torque(i, j) >= level_; }

  void march_cell(std::size_t i, std::size_t j) {
    const bool b0 = inside(i, j), b1 = inside(i + 1, j), b2 = inside(i + 1, j + 1),
               b3 = inside(i, j + 1);
    const int config = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
    if (config == 0 || config == 15) return;

    const std::size_t e[4] = {d_edge(i, j), n_edge(i + 1, j), d_edge(i, j + 1), n_edge(i, j)};

    if (config == 0b0101 || config == 0b1010) {
      const double centre = 0.25 * (grid_.torque(i, j) + grid_.torque(i + 1, j) +
                                    grid_.torque(i + 1, j + 1) + grid_.torque(i, j + 1));
      const bool centre_inside = centre >= level_;
      // Cut off the two corners that disagree with the centre.
      const bool cut_c1_c3 = (config == 0b0101) == centre_inside;
      if (cut_c1_c3) {
        add(e[0], e[1]);
        add(e[2], e[3]);
      } else {
        add(e[3], e[0]);
        add(e[1], e[2]);
      }
      return;
    }

    std::size_t crossed[2];
    int k = 0;
    const bool corner[4] = {b0, b1, b2, b3};
    // Edge m joins corners (m, m+1) except e2 = c3-c2 and e3 = c0-c3, which
    // cross under the same test.
    const int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
    for (int m = 0; m < 4; ++m) {
      if (corner[ends[m][0]] != corner[ends[m][1]]) crossed[k++] = e[m];
    }
    add(crossed[0], crossed[1]);
  }

  void add(std::size_t a, std::size_t b) {
    const std::size_t index = segments_.size();
    segments_.push_back({a, b});
    incident_[a].push_back(index);
    incident_[b].push_back(index);
  }

  ContourPoint point_on_edge(std::size_t edge) const {
    const std::size_t nn = grid_.n_count();
    const std::size_t plane = grid_.d_count() * nn;
    const bool along_d = edge < plane;
    const std::size_t local = along_d ? edge : edge - plane;
    const std::size_t i = local / nn;
    const std::size_t j = local % nn;
    const std::size_t i2 = along_d ? i + 1 : i;
    const std::size_t j2 = along_d ? j : j + 1;
    const double a = grid_.torque(i, j);
    const double b = grid_.torque(i2, j2);
    const double t = (level_ - a) / (b - a);
    const double d0 = grid_.diameters()[i];
    const double d1 = grid_.diameters()[i2];
    const double n0 = grid_.count_at(j);
    const double n1 = grid_.count_at(j2);
    return {d0 + t * (d1 - d0), n0 + t * (n1 - n0)};
  }

  std::vector<Polyline> stitch() {
    std::vector<bool> used(segments_.size(), false);
    std::vector<Polyline> out;

    auto walk = [&](std::size_t start_segment, std::size_t start_edge) {
      Polyline line;
      std::size_t edge = start_edge;
      std::size_t seg = start_segment;
      line.push_back(point_on_edge(edge));
      while (true) {
        used[seg] = true;
        edge = segments_[seg].edge_a == edge ? segments_[seg].edge_b : segments_[seg].edge_a;
        line.push_back(point_on_edge(edge));
        std::size_t next = segments_.size();
        for (std::size_t candidate : incident_[edge]) {
          if (!used[candidate]) {
            next = candidate;
            break;
          }
        }
        if (next == segments_.size()) break;
        seg = next;
      }
      out.push_back(std::move(line));
    };

    // Open chains start at boundary edges (one incident segment).
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (used[s]) continue;
      for (std::size_t edge : {segments_[s].edge_a, segments_[s].edge_b}) {
        if (!used[s] && incident_.at(edge).size() == 1) walk(s, edge);
      }
    }
    // Whatever remains forms closed loops.
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (!used[s]) walk(s, segments_[s].edge_a);
    }
    return out;
  }

  const DesignGrid& grid_;
  double level_;
  std::vector<Segment> segments_;
  std::map<std::size_t, std::vector<std::size_t>> incident_;
};

std::string json_export(const DesignGrid& grid, const ContourSet& contours) {
  using detail::round_sig;
  const GraphSpec& spec = grid.spec();
  nlohmann::ordered_json root;
  root["spec"] = {
      {"theta_deg", round_sig(units::rad_to_deg(spec.fixed_angle))},
      {"pressure_kpa", round_sig(units::pa_to_kpa(spec.fixed_pressure))},
      {"leg_d_mm", round_sig(units::m_to_mm(spec.leg.diameter()))},
      {"d_min_mm", round_sig(units::m_to_mm(spec.d_range.min))},
      {"d_max_mm", round_sig(units::m_to_mm(spec.d_range.max))},
      {"d_step_mm", round_sig(units::m_to_mm(spec.d_range.step))},
      {"n_min", spec.n_range.min},
      {"n_max", spec.n_range.max},
  };
  auto cells = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < grid.d_count(); ++i) {
    for (std::size_t j = 0; j < grid.n_count(); ++j) {
      cells.push_back({{"d_mm", round_sig(units::m_to_mm(grid.diameters()[i]))},
                       {"n", grid.count_at(j)},
                       {"torque_Nm", round_sig(grid.torque(i, j))}});
    }
  }
  root["cells"] = std::move(cells);
  auto line = nlohmann::ordered_json::array();
  for (const PackingLimit& limit : grid.n_max_line()) {
    line.push_back({{"d_mm", round_sig(units::m_to_mm(limit.diameter))}, {"n_max", limit.n_max}});
  }
  root["n_max_line"] = std::move(line);
  auto levels = nlohmann::ordered_json::array();
  for (const ContourLevel& level : contours.levels) {
    auto polylines = nlohmann::ordered_json::array();
    for (const Polyline& poly : level.polylines) {
      auto vertices = nlohmann::ordered_json::array();
      for (const ContourPoint& p : poly) {
        vertices.push_back({round_sig(units::m_to_mm(p.diameter)), round_sig(p.count)});
      }
      polylines.push_back(std::move(vertices));
    }
    levels.push_back({{"level_Nm", round_sig(level.level)}, {"polylines", std::move(polylines)}});
  }
  root["contours"] = std::move(levels);
  return root.dump(2) + "\n";
}

std::string csv_export(const DesignGrid& grid) {
  std::string out = "d_mm,n,torque_Nm\n";
  for (std::size_t i = 0; i < grid.d_count(); ++i) {
    const std::string d_mm = detail::format_sig(units::m_to_mm(grid.diameters()[i]));
    for (std::size_t j = 0; j < grid.n_count(); ++j) {
      out += d_mm;
      out += ',';
      out += std::to_string(grid.count_at(j));
      out += ',';
      out += detail::format_sig(grid.torque(i, j));
      out += '\n';
    }
  }
  return out;
}

// Blue -> teal -> yellow ramp.
std::string ramp_colour(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
  const int seg = t < 0.5 ? 0 : 1;
  const double u = t < 0.5 ? t * 2.0 : (t - 0.5) * 2.0;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[seg][0] + u * (stops[seg + 1][0] - stops[seg][0]))),
                static_cast<int>(std::lround(stops[seg][1] + u * (stops[seg + 1][1] - stops[seg][1]))),
                static_cast<int>(std::lround(stops[seg][2] + u * (stops[seg + 1][2] - stops[seg][2]))));
  return buf;
}

std::string svg_export(const DesignGrid& grid, const ContourSet& contours) {
  using detail::format_fixed;
  constexpr double kWidth = 640.0, kHeight = 400.0, kMargin = 40.0;
  const double step = grid.spec().d_range.step;
  const double d_lo = grid.diameters().front() - step / 2.0;
  const double d_hi = grid.diameters().back() + step / 2.0;
  const double n_lo = grid.count_at(0) - 0.5;
  const double n_hi = grid.count_at(grid.n_count() - 1) + 0.5;
  auto x_of = [&](double d) { return kMargin + (d - d_lo) / (d_hi - d_lo) * kWidth; };
  auto y_of = [&](double n) { return kMargin + (n_hi - n) / (n_hi - n_lo) * kHeight; };
  const double lo = grid.min_torque();
  const double hi = grid.max_torque();
  const double cell_w = step / (d_hi - d_lo) * kWidth;
  const double cell_h = kHeight / (n_hi - n_lo);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(kWidth + 2 * kMargin, 0)
      << "\" height=\"" << format_fixed(kHeight + 2 * kMargin, 0) << "\">\n";
  svg << "<g id=\"cells\">\n";
  for (std::size_t i = 0; i < grid.d_count(); ++i) {
    for (std::size_t j = 0; j < grid.n_count(); ++j) {
      const double t = hi > lo ? (grid.torque(i, j) - lo) / (hi - lo) : 0.0;
      svg << "<rect x=\"" << format_fixed(x_of(grid.diameters()[i]) - cell_w / 2.0, 3) << "\" y=\""
          << format_fixed(y_of(grid.count_at(j)) - cell_h / 2.0, 3) << "\" width=\""
          << format_fixed(cell_w, 3) << "\" height=\"" << format_fixed(cell_h, 3) << "\" fill=\""
          << ramp_colour(t) << "\"/>\n";
    }
  }
  svg << "</g>\n<g id=\"contours\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"1.5\">\n";
  for (const ContourLevel& level : contours.levels) {
    for (const Polyline& poly : level.polylines) {
      svg << "<polyline data-level=\"" << detail::format_sig(level.level) << "\" points=\"";
      for (std::size_t k = 0; k < poly.size(); ++k) {
        if (k) svg << ' ';
        svg << format_fixed(x_of(poly[k].diameter), 3) << ',' << format_fixed(y_of(poly[k].count), 3);
      }
      svg << "\"/>\n";
    }
  }
  svg << "</g>\n<polyline id=\"n-max\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" points=\"";
  // Step line: horizontal over each cell's d extent, at the top of the n_max cell.
  bool first = true;
  for (const PackingLimit& limit : grid.n_max_line()) {
    const double y = y_of(std::clamp(limit.n_max + 0.5, n_lo, n_hi));
    for (double d : {limit.diameter - step / 2.0, limit.diameter + step / 2.0}) {
      if (!first) svg << ' ';
      first = false;
      svg << format_fixed(x_of(d), 3) << ',' << format_fixed(y, 3);
    }
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace

ContourSet iso_contour(const DesignGrid& grid, const std::vector<double>& levels) {
  ContourSet set;
  for (double level : levels) {
    if (!std::isfinite(level)) throw SpecError("contour levels must be finite");
    ContourLevel out{level, {}};
    if (grid.d_count() >= 2 && grid.n_count() >= 2 && level >= grid.min_torque() &&
        level <= grid.max_torque()) {
      out.polylines = MarchingSquares(grid, level).run();
    }
    set.levels.push_back(std::move(out));
  }
  return set;
}

GridFormat parse_grid_format(std::string_view name) {
  if (name == "csv") return GridFormat::Csv;
  if (name == "json") return GridFormat::Json;
  if (name == "svg") return GridFormat::Svg;
  throw UsageError("unknown grid format '" + std::string(name) + "' (expected csv, json or svg)");
}

std::string export_grid(const DesignGrid& grid, const ContourSet& contours, GridFormat format) {
  switch (format) {
    case GridFormat::Csv:
      return csv_export(grid);
    case GridFormat::Json:
      return json_export(grid, contours);
    case GridFormat::Svg:
      return svg_export(grid, contours);
  }
  throw UsageError("unknown grid format");
}

std::vector<GridCell> import_grid_csv(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty()) throw ParseError(1, "missing header");
  if (rows.front() != "d_mm,n,torque_Nm") throw ParseError(1, "expected header d_mm,n,torque_Nm");
  std::vector<GridCell> cells;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto fields = detail::split(rows[k]);
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
    cells.push_back({detail::parse_double(fields[0], line_no, "d_mm"),
                     detail::parse_int(fields[1], line_no, "n"),
                     detail::parse_double(fields[2], line_no, "torque_Nm")});
  }
  return cells;
}

}  // namespace exo
