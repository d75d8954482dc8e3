#pragma once

// Design calculation graphs: torque over a (d, n) lattice at a fixed bend
// angle and pressure, the stepped packing limit, and iso-torque contours.

#include <string>
#include <string_view>
#include <vector>

#include "exo/actuator_model.hpp"

namespace exo {

struct DiameterRange {
  double min;   // m
  double max;   // m
  double step;  // m

  /// Lattice samples min + i * step, i = 0.. while <= max (with 1e-9 step slack).
  std::vector<double> samples() const;
};

struct CountRange {
  int min;
  int max;
};

struct GraphSpec {
  double fixed_angle;     // rad
  double fixed_pressure;  // Pa
  DiameterRange d_range;
  CountRange n_range;
  LegGeometry leg;

  /// d in [10, 60] mm step 0.5 mm, n in [1, 12], leg D = 120 mm.
  static GraphSpec defaults(double fixed_angle, double fixed_pressure);

  /// Throws SpecError for empty or inverted ranges, DomainError for bad physics.
  void validate() const;
};

struct PackingLimit {
  double diameter;  // m
  int n_max;
};

class DesignGrid {
 public:
  DesignGrid(GraphSpec spec, std::vector<double> diameters, std::vector<double> torques,
             std::vector<PackingLimit> n_max_line);

  const GraphSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& diameters() const noexcept { return diameters_; }
  const std::vector<PackingLimit>& n_max_line() const noexcept { return n_max_line_; }

  std::size_t d_count() const noexcept { return diameters_.size(); }
  std::size_t n_count() const noexcept {
    return static_cast<std::size_t>(spec_.n_range.max - spec_.n_range.min + 1);
  }
  int count_at(std::size_t j) const noexcept { return spec_.n_range.min + static_cast<int>(j); }

  /// Torque (N m) at d index i, n index j (n = n_range.min + j).
  double torque(std::size_t i, std::size_t j) const { return torques_.at(i * n_count() + j); }
  const std::vector<double>& torques() const noexcept { return torques_; }

  double min_torque() const;
  double max_torque() const;

 private:
  GraphSpec spec_;
  std::vector<double> diameters_;
  std::vector<double> torques_;  // row-major by d index
  std::vector<PackingLimit> n_max_line_;
};

/// Evaluates every lattice cell with exosuit_torque. With jobs > 1 the d rows
/// are split across threads; the result is identical for every jobs value.
DesignGrid generate_grid(const GraphSpec& spec, int jobs = 1);

struct ContourPoint {
  double diameter;  // m
  double count;     // continuous n coordinate
};

using Polyline = std::vector<ContourPoint>;

struct ContourLevel {
  double level;  // N m
  std::vector<Polyline> polylines;
};

struct ContourSet {
  std::vector<ContourLevel> levels;
};

/// Marching squares on the (d, n) lattice with linear interpolation along
/// cell edges. A corner counts as "inside" when its torque >= level. Saddle
/// cells are resolved by the mean of the four corners. Polylines are stitched
/// across cells; closed loops repeat their first vertex at the end.
ContourSet iso_contour(const DesignGrid& grid, const std::vector<double>& levels);

enum class GridFormat { Csv, Json, Svg };

/// Throws UsageError for names other than csv, json, svg.
GridFormat parse_grid_format(std::string_view name);

/// Deterministic serialization. CSV is `d_mm,n,torque_Nm` with 6 significant
/// digits; JSON carries spec, cells, n_max_line and contours; SVG is a
/// self-contained heatmap with one rect per cell.
std::string export_grid(const DesignGrid& grid, const ContourSet& contours, GridFormat format);

struct GridCell {
  double d_mm;
  int n;
  double torque_Nm;
};

/// Reads the CSV export back. Throws ParseError with a line number on malformed rows.
std::vector<GridCell> import_grid_csv(std::string_view text);

}  // namespace exo
