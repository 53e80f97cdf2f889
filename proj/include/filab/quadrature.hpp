#pragma once

#include <cmath>
#include <concepts>
#include <initializer_list>
#include <vector>

#include "filab/errors.hpp"

namespace filab {

namespace detail {

template <typename F>
double adaptive_simpson(const F& f, double a, double m, double b, double fa, double fm,
                        double fb, double whole, double eps, int depth, double& worst_rel) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps || !std::isfinite(delta)) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    const double scale = std::max({std::abs(whole), std::abs(left + right), 1e-300});
    const double rel = std::abs(delta) / scale;
    if (rel > worst_rel) worst_rel = rel;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1, worst_rel) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1, worst_rel);
}

}  // namespace detail

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_depth = 48;
};

// Adaptive Simpson on [a, b]. Throws QuadratureError if the depth limit is hit
// before the local error estimates drop below tolerance.
template <typename F>
  requires std::invocable<F, double>
double integrate(const F& f, double a, double b, QuadratureOptions opts = {}) {
  if (!(b >= a)) throw ValidationError("integrate: requires b >= a");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Seed the absolute tolerance from a coarse composite estimate of |integral|.
  double coarse = 0.0;
  const int k0 = 16;
  for (int i = 0; i < k0; ++i) {
    const double x0 = a + (b - a) * i / k0;
    const double x1 = a + (b - a) * (i + 1) / k0;
    coarse += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  const double scale = std::max({std::abs(whole), std::abs(coarse), 1e-300});
  double worst_rel = 0.0;
  const double out = detail::adaptive_simpson(f, a, m, b, fa, fm, fb, whole,
                                              opts.rel_tol * scale, opts.max_depth, worst_rel);
  if (worst_rel > opts.rel_tol * 100) {
    throw QuadratureError("integrate: adaptive Simpson did not converge", worst_rel);
  }
  return out;
}

// Integrates over [pts[0], pts.back()] splitting at each interior point
// (known kinks of the integrand).
template <typename F>
  requires std::invocable<F, double>
double integrate_split(const F& f, const std::vector<double>& pts, QuadratureOptions opts = {}) {
  if (pts.size() < 2) throw ValidationError("integrate_split: need at least 2 points");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += integrate(f, pts[i], pts[i + 1], opts);
  }
  return total;
}

}  // namespace filab
