#pragma once

// Volume transfer: trading few large actuators for many small ones. Compares
// two (n, d) design points and searches the packing-feasible lattice for the
// smallest diameter that still meets every torque requirement.

#include <optional>
#include <string>
#include <vector>

#include "exo/actuator_model.hpp"

namespace exo {

/// Minimum torque at a given bend angle and pressure.
struct TorqueRequirement {
  double bend_angle;  // rad
  double pressure;    // Pa
  double min_torque;  // N m

  OperatingPoint operating_point() const { return {pressure, bend_angle}; }
};

class DesignIndicators {
 public:
  /// Throws SpecError if empty or any min_torque <= 0.
  explicit DesignIndicators(std::vector<TorqueRequirement> requirements);

  const std::vector<TorqueRequirement>& requirements() const noexcept { return requirements_; }

 private:
  std::vector<TorqueRequirement> requirements_;
};

struct DesignPoint {
  ActuatorGeometry geometry;

  int count() const noexcept { return geometry.count(); }
  double diameter() const noexcept { return geometry.diameter(); }

  static DesignPoint make(int count, double diameter) {
    return {ActuatorGeometry::from_diameter(count, diameter)};
  }
};

struct IndicatorCheck {
  TorqueRequirement requirement;
  double torque;  // candidate torque at the requirement's operating point
  bool met;
};

struct TransferReport {
  DesignPoint baseline;
  DesignPoint candidate;
  OperatingPoint at;
  double torque_change;           // (after - before) / before
  double stress_coverage_change;  // same convention
  double profile_change;          // same convention
  std::vector<IndicatorCheck> feasibility;  // candidate vs indicators
  std::vector<std::string> notes;
};

/// Throws ConstraintError("coronal_plane") when either point exceeds the
/// packing limit for `leg`.
TransferReport compare(const DesignPoint& baseline, const DesignPoint& candidate,
                       const LegGeometry& leg, const OperatingPoint& at,
                       const DesignIndicators* indicators = nullptr);

struct SearchBounds {
  double d_min;   // m
  double d_max;   // m
  double d_step;  // m
};

struct OptimizationResult {
  bool feasible = false;
  std::optional<DesignPoint> point;
  std::optional<TransferReport> report;  // point vs baseline, at the first requirement
  /// When infeasible: indices of requirements no lattice point can meet.
  std::vector<std::size_t> binding;
  /// Lattice points (d, n) visited.
  std::size_t evaluated = 0;
};

/// Exhaustive search over d lattice x n in [1, n_max(d)]: minimum d first,
/// then maximum n. The baseline is only used for the transfer report.
OptimizationResult optimize(const DesignIndicators& indicators, const LegGeometry& leg,
                            const SearchBounds& bounds, const DesignPoint& baseline, int jobs = 1);

}  // namespace exo
