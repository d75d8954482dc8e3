#include "exo/volume_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "exo/design_graph.hpp"
#include "exo/errors.hpp"

namespace exo {

namespace {

constexpr const char* kProfileNote =
    "profile_change uses profile depth = actuator diameter; other profile definitions "
    "(a published -37.3% for 38 mm/n=2 -> 25 mm/n=7, versus -34.2% here) are not modeled";

double relative_change(double before, double after) { return (after - before) / before; }

void require_packable(const LegGeometry& leg, const DesignPoint& point, const char* role) {
  const int n_max = max_actuator_count(leg, point.diameter());
  if (point.count() > n_max) {
    throw ConstraintError("coronal_plane",
                          std::string(role) + " point n=" + std::to_string(point.count()) +
                              " exceeds the packing limit n_max=" + std::to_string(n_max));
  }
}

bool meets_all(const ActuatorGeometry& geom, const DesignIndicators& indicators) {
  for (const TorqueRequirement& req : indicators.requirements()) {
    if (exosuit_torque(geom, req.operating_point()) < req.min_torque) return false;
  }
  return true;
}

}  // namespace

DesignIndicators::DesignIndicators(std::vector<TorqueRequirement> requirements)
    : requirements_(std::move(requirements)) {
  if (requirements_.empty()) throw SpecError("at least one torque requirement is needed");
  for (const TorqueRequirement& req : requirements_) {
    if (!(req.min_torque > 0.0) || !std::isfinite(req.min_torque)) {
      throw SpecError("minimum torque must be positive");
    }
    req.operating_point();  // validates angle and pressure
  }
}

TransferReport compare(const DesignPoint& baseline, const DesignPoint& candidate,
                       const LegGeometry& leg, const OperatingPoint& at,
                       const DesignIndicators* indicators) {
  require_packable(leg, baseline, "baseline");
  require_packable(leg, candidate, "candidate");

  const double torque_before = exosuit_torque(baseline.geometry, at);
  const double torque_after = exosuit_torque(candidate.geometry, at);
  if (!(torque_before > 0.0)) {
    throw DomainError("baseline torque is zero at the comparison point; relative change undefined");
  }

  TransferReport report{baseline,
                        candidate,
                        at,
                        relative_change(torque_before, torque_after),
                        relative_change(stress_coverage(leg, baseline.geometry).radians,
                                        stress_coverage(leg, candidate.geometry).radians),
                        relative_change(profile_depth(baseline.geometry),
                                        profile_depth(candidate.geometry)),
                        {},
                        {kProfileNote}};

  if (indicators) {
    for (const TorqueRequirement& req : indicators->requirements()) {
      const double torque = exosuit_torque(candidate.geometry, req.operating_point());
      report.feasibility.push_back({req, torque, torque >= req.min_torque});
    }
  }
  return report;
}

OptimizationResult optimize(const DesignIndicators& indicators, const LegGeometry& leg,
                            const SearchBounds& bounds, const DesignPoint& baseline, int jobs) {
  if (!(bounds.d_step > 0.0) || !(bounds.d_min > 0.0) || !(bounds.d_min <= bounds.d_max) ||
      !std::isfinite(bounds.d_max)) {
    throw SpecError("search bounds must satisfy 0 < d_min <= d_max and d_step > 0");
  }
  const std::vector<double> diameters = DiameterRange{bounds.d_min, bounds.d_max, bounds.d_step}.samples();
  const std::size_t nd = diameters.size();
  const std::size_t nreq = indicators.requirements().size();

  // Per diameter: the largest feasible n (0 if none), points visited, and the
  // best torque / requirement ratio seen for each requirement.
  struct RowResult {
    int best_n = 0;
    std::size_t evaluated = 0;
    std::vector<double> best_ratio;
  };
  std::vector<RowResult> rows(nd);

  auto search_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RowResult& row = rows[i];
      row.best_ratio.assign(nreq, 0.0);
      const int n_max = max_actuator_count(leg, diameters[i]);
      for (int n = 1; n <= n_max; ++n) {
        const auto geom = ActuatorGeometry::from_diameter(n, diameters[i]);
        ++row.evaluated;
        for (std::size_t r = 0; r < nreq; ++r) {
          const TorqueRequirement& req = indicators.requirements()[r];
          row.best_ratio[r] =
              std::max(row.best_ratio[r], exosuit_torque(geom, req.operating_point()) / req.min_torque);
        }
        if (meets_all(geom, indicators)) row.best_n = n;
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1 || nd < 2) {
    search_rows(0, nd);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (nd + workers - 1) / workers;
    for (std::size_t begin = 0; begin < nd; begin += chunk) {
      pool.emplace_back(search_rows, begin, std::min(nd, begin + chunk));
    }
  }

  OptimizationResult result;
  for (const RowResult& row : rows) result.evaluated += row.evaluated;

  for (std::size_t i = 0; i < nd; ++i) {
    if (rows[i].best_n > 0) {
      result.feasible = true;
      result.point = DesignPoint::make(rows[i].best_n, diameters[i]);
      result.report = compare(baseline, *result.point, leg,
                              indicators.requirements().front().operating_point(), &indicators);
      return result;
    }
  }

  for (std::size_t r = 0; r < nreq; ++r) {
    double best = 0.0;
    for (const RowResult& row : rows) best = std::max(best, row.best_ratio[r]);
    if (best < 1.0) result.binding.push_back(r);
  }
  if (result.binding.empty() && nd > 0) {
    // Each requirement is reachable alone but never jointly: report the tightest one.
    std::size_t tightest = 0;
    double tightest_ratio = HUGE_VAL;
    for (std::size_t r = 0; r < nreq; ++r) {
      double best = 0.0;
      for (const RowResult& row : rows) best = std::max(best, row.best_ratio[r]);
      if (best < tightest_ratio) {
        tightest_ratio = best;
        tightest = r;
      }
    }
    result.binding.push_back(tightest);
  }
  return result;
}

}  // namespace exo
