#pragma once

#include <cmath>
#include <numbers>

namespace filab {

// Volume of the unit ball in R^d: pi^{d/2} / Gamma(d/2 + 1).
inline double unit_ball_volume(int d) {
  return std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0));
}

// Surface area of the unit sphere S^{d-1}: d * V_d.
inline double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace filab
