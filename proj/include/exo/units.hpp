#pragma once

#include <numbers>

namespace exo::units {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double mm_to_m(double mm) { return mm * 1e-3; }
constexpr double m_to_mm(double m) { return m * 1e3; }

constexpr double kpa_to_pa(double kpa) { return kpa * 1e3; }
constexpr double pa_to_kpa(double pa) { return pa * 1e-3; }

}  // namespace exo::units
