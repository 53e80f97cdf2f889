#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "filab/errors.hpp"
#include "filab/potential.hpp"
#include "filab/vec.hpp"

namespace filab {

struct PhiValue {
  double phi;
  double dphi;
  double ddphi;
};

// Radial bump profile: continuous, decreasing, supported on [0,1], with an
// exact quadratic cap phi(0) - s^2/2 on [0, alpha] and |phi''| <= 1 throughout.
//
// The concrete profile is
//   phi(s) = 11/64 - s^2/2                                on [0, 1/4],
//   phi(s) = (4 + 8s - 48s^2 + 56s^3 - 20s^4) / 27        on [1/4, 1],
//   phi(s) = 0                                            on (1, inf),
// which is C^2 at both joins (value, slope and curvature all match at 1/4
// and at 1). On [1/4, 1], phi'(s) = -8 (s-1)^2 (10s-1) / 27 <= 0.
class BumpProfile {
 public:
  static constexpr double kAlpha = 0.25;
  static constexpr double kPhi0 = 11.0 / 64.0;

  PhiValue eval(double s) const {
    if (s < 0.0 || std::isnan(s)) {
      throw std::domain_error("BumpProfile::eval: negative argument");
    }
    if (s <= kAlpha) {
      return {kPhi0 - 0.5 * s * s, -s, -1.0};
    }
    if (s <= 1.0) {
      const double v = (4.0 + s * (8.0 + s * (-48.0 + s * (56.0 - 20.0 * s)))) / 27.0;
      const double dv = (8.0 + s * (-96.0 + s * (168.0 - 80.0 * s))) / 27.0;
      const double ddv = (-96.0 + s * (336.0 - 240.0 * s)) / 27.0;
      return {v, dv, ddv};
    }
    return {0.0, 0.0, 0.0};
  }

  double alpha() const { return kAlpha; }
  double phi0() const { return kPhi0; }
  std::string_view id() const { return "corrected-footnote-v1"; }
};

inline PhiValue phi_eval(double s) { return BumpProfile{}.eval(s); }

struct HessianEigs {
  double tangential;  // multiplicity d-1
  double radial;      // multiplicity 1
};

// Eigenvalues of the Hessian of z -> r^2 * phi(|z - center| / r) at x.
// The tangential eigenvalue is r phi'(s) / |x - center| = phi'(s) / s and the
// radial one is phi''(s), with s = |x - center| / r; both lie in [-1, 1].
inline HessianEigs radial_hessian_eigs(std::span<const double> x,
                                       std::span<const double> center, double r,
                                       const BumpProfile& profile = {}) {
  if (x.size() != center.size()) throw DimensionMismatch(center.size(), x.size());
  if (!(r > 0.0)) throw ValidationError("radial_hessian_eigs: r must be positive");
  const double d = dist(x, center);
  if (d == 0.0) {
    throw NumericError("radial_hessian_eigs: x coincides with center");
  }
  const double s = d / r;
  const PhiValue p = profile.eval(s);
  return {r * p.dphi / d, p.ddphi};
}

struct SmoothnessReport {
  double max_ratio = 0.0;
  std::pair<Vec, Vec> worst;
  std::size_t violations = 0;   // pairs with ratio > beta * (1 + 1e-9)
  std::size_t skipped = 0;      // coincident pairs
  std::vector<std::pair<Vec, Vec>> violating_pairs;
};

// Empirical Lipschitz audit of the gradient over the supplied pairs.
inline SmoothnessReport smoothness_audit(const SmoothPotential& potential,
                                         std::span<const std::pair<Vec, Vec>> pairs,
                                         double beta) {
  if (pairs.empty()) throw ValidationError("smoothness_audit: no pairs");
  SmoothnessReport report;
  for (const auto& [x, y] : pairs) {
    const double dxy = dist(x, y);
    if (dxy == 0.0) {
      ++report.skipped;
      continue;
    }
    const Vec gx = potential(x).grad;
    const Vec gy = potential(y).grad;
    const double ratio = dist(gx, gy) / dxy;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst = {x, y};
    }
    if (ratio > beta * (1.0 + 1e-9)) {
      ++report.violations;
      if (report.violating_pairs.size() < 16) report.violating_pairs.push_back({x, y});
    }
  }
  return report;
}

}  // namespace filab
