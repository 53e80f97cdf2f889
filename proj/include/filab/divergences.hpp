#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "filab/errors.hpp"
#include "filab/grid_density.hpp"
#include "filab/potential.hpp"

namespace filab {

namespace detail {

inline void require_same_grid(const GridDensity1D& a, const GridDensity1D& b) {
  if (a.n() != b.n() || a.lo() != b.lo() || a.hi() != b.hi()) {
    throw ValidationError("support mismatch: densities live on different grids");
  }
}

constexpr double kDensityFloor = 1e-300;

// Centered finite differences with one-sided fallback at the ends of the
// index range [i0, i1].
inline std::vector<double> fd_derivative(std::span<const double> f, double spacing,
                                         int i0, int i1) {
  std::vector<double> out(f.size(), 0.0);
  for (int i = i0; i <= i1; ++i) {
    if (i > i0 && i < i1) {
      out[static_cast<std::size_t>(i)] =
          (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i - 1)]) / (2.0 * spacing);
    } else if (i == i0 && i + 1 <= i1) {
      out[static_cast<std::size_t>(i)] =
          (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i)]) / spacing;
    } else if (i == i1 && i - 1 >= i0) {
      out[static_cast<std::size_t>(i)] =
          (f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i - 1)]) / spacing;
    }
  }
  return out;
}

}  // namespace detail

// Relative Fisher information FI(mu || pi) = E_mu[(d/dx ln(mu/pi))^2] by
// centered finite differences and the trapezoid rule. The integrand is
// windowed to where mu exceeds 1e-12 of its peak to avoid 0 * inf at the
// far tails.
inline double fisher_information(const GridDensity1D& mu, const GridDensity1D& pi,
                                 double window = 1e-12) {
  detail::require_same_grid(mu, pi);
  const auto mv = mu.values();
  const auto pv = pi.values();
  const int n = mu.n();
  const double peak = *std::max_element(mv.begin(), mv.end());
  int i0 = 0, i1 = n - 1;
  while (i0 < n - 1 && mv[static_cast<std::size_t>(i0)] <= window * peak) ++i0;
  while (i1 > 0 && mv[static_cast<std::size_t>(i1)] <= window * peak) --i1;
  if (i1 - i0 < 2) throw ValidationError("fisher_information: window too narrow");
  std::vector<double> logratio(static_cast<std::size_t>(n), 0.0);
  for (int i = i0; i <= i1; ++i) {
    const double m = std::max(mv[static_cast<std::size_t>(i)], detail::kDensityFloor);
    const double p = std::max(pv[static_cast<std::size_t>(i)], detail::kDensityFloor);
    logratio[static_cast<std::size_t>(i)] = std::log(m) - std::log(p);
  }
  const auto score = detail::fd_derivative(logratio, mu.spacing(), i0, i1);
  std::vector<double> integrand(static_cast<std::size_t>(i1 - i0 + 1));
  for (int i = i0; i <= i1; ++i) {
    integrand[static_cast<std::size_t>(i - i0)] =
        mv[static_cast<std::size_t>(i)] * score[static_cast<std::size_t>(i)] * score[static_cast<std::size_t>(i)];
  }
  return GridDensity1D::trapz(integrand, mu.spacing());
}

struct RefinedValue {
  double value = 0.0;   // full-resolution estimate
  double coarse = 0.0;  // same estimate on every other grid node
  double rel_change() const {
    return std::abs(value - coarse) / std::max(std::abs(value), 1e-300);
  }
};

namespace detail {
inline GridDensity1D coarsen(const GridDensity1D& g) {
  std::vector<double> v;
  for (int i = 0; i < g.n(); i += 2) v.push_back(g.values()[static_cast<std::size_t>(i)]);
  const double hi = g.x(2 * (static_cast<int>(v.size()) - 1));
  return GridDensity1D(g.lo(), hi, std::move(v));
}
}  // namespace detail

// Fisher information together with a half-resolution value, for grid
// convergence reporting.
inline RefinedValue fisher_information_refined(const GridDensity1D& mu,
                                               const GridDensity1D& pi) {
  return {fisher_information(mu, pi),
          fisher_information(detail::coarsen(mu), detail::coarsen(pi))};
}

enum class Divergence { KL, TV, Chi2 };

inline Divergence divergence_kind(const std::string& name) {
  if (name == "KL" || name == "kl") return Divergence::KL;
  if (name == "TV" || name == "tv") return Divergence::TV;
  if (name == "chi2" || name == "Chi2") return Divergence::Chi2;
  throw ValidationError("unknown divergence kind: " + name);
}

inline double divergence(const GridDensity1D& mu, const GridDensity1D& pi,
                         Divergence kind) {
  detail::require_same_grid(mu, pi);
  const auto mv = mu.values();
  const auto pv = pi.values();
  const int n = mu.n();
  std::vector<double> integrand(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double m = mv[static_cast<std::size_t>(i)];
    const double p = pv[static_cast<std::size_t>(i)];
    switch (kind) {
      case Divergence::KL:
        if (m > 0.0) {
          integrand[static_cast<std::size_t>(i)] =
              m * (std::log(std::max(m, detail::kDensityFloor)) -
                   std::log(std::max(p, detail::kDensityFloor)));
        }
        break;
      case Divergence::TV:
        integrand[static_cast<std::size_t>(i)] = 0.5 * std::abs(m - p);
        break;
      case Divergence::Chi2:
        if (m > 0.0) {
          const double diff = m - p;
          integrand[static_cast<std::size_t>(i)] = diff * diff / std::max(p, detail::kDensityFloor);
        }
        break;
    }
  }
  return GridDensity1D::trapz(integrand, mu.spacing());
}

struct MuckenhouptResult {
  double B = 0.0;
  double median = 0.0;
  int trimmed = 0;  // nodes excluded because 1/pi would overflow
};

// Muckenhoupt quantity B for a 1-D density: with m a median,
//   B = max( sup_{x<m} pi((-inf,x]) * int_x^m 1/pi,
//            sup_{x>m} pi([x,inf))  * int_m^x 1/pi ),
// evaluated on the grid by cumulative sums. The true Poincare constant
// satisfies B <= C_PI <= 4B.
inline MuckenhouptResult muckenhoupt_report(const GridDensity1D& pi) {
  const auto v = pi.values();
  const int n = pi.n();
  const auto cdf = pi.cdf();
  // median by linear interpolation of the CDF
  int im = 0;
  while (im < n - 1 && cdf[static_cast<std::size_t>(im + 1)] < 0.5) ++im;
  const double c0 = cdf[static_cast<std::size_t>(im)];
  const double c1 = cdf[static_cast<std::size_t>(im + 1)];
  const double frac = (c1 > c0) ? (0.5 - c0) / (c1 - c0) : 0.0;
  const double median = pi.x(im) + frac * pi.spacing();

  MuckenhouptResult out;
  out.median = median;
  constexpr double kInvCap = 1e280;
  const auto inv = [&](int i) -> double {
    const double p = v[static_cast<std::size_t>(i)];
    if (p < 1.0 / kInvCap) {
      ++out.trimmed;
      return -1.0;
    }
    return 1.0 / p;
  };
  // tail mass pi([x_i, inf)) accumulated from the right end; 1 - cdf would be
  // pure cancellation noise out where the density is tiny
  std::vector<double> right_tail(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 2; i >= 0; --i) {
    right_tail[static_cast<std::size_t>(i)] =
        right_tail[static_cast<std::size_t>(i + 1)] +
        0.5 * pi.spacing() * (v[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i + 1)]);
  }
  // right side: walk up from the first node past the median
  {
    double acc = 0.0;
    double prev_inv = -1.0;
    double prev_x = median;
    for (int i = im + 1; i < n; ++i) {
      const double cur = inv(i);
      if (cur < 0.0) break;
      const double left = (prev_inv < 0.0) ? cur : prev_inv;
      acc += 0.5 * (left + cur) * (pi.x(i) - prev_x);
      prev_inv = cur;
      prev_x = pi.x(i);
      out.B = std::max(out.B, right_tail[static_cast<std::size_t>(i)] * acc);
    }
  }
  // left side: walk down from the last node before the median
  {
    double acc = 0.0;
    double prev_inv = -1.0;
    double prev_x = median;
    for (int i = im; i >= 0; --i) {
      const double cur = inv(i);
      if (cur < 0.0) break;
      const double right = (prev_inv < 0.0) ? cur : prev_inv;
      acc += 0.5 * (right + cur) * (prev_x - pi.x(i));
      prev_inv = cur;
      prev_x = pi.x(i);
      out.B = std::max(out.B, cdf[static_cast<std::size_t>(i)] * acc);
    }
  }
  return out;
}

inline double muckenhoupt_B(const GridDensity1D& pi) { return muckenhoupt_report(pi).B; }

// Holley-Stroock: C_PI(mu) <= (C/c) C_PI(pi) with C/c = exp(log_ratio_bound).
inline double holley_stroock_bound(double cpi_base, double log_ratio_bound) {
  if (cpi_base < 0.0 || log_ratio_bound < 0.0) {
    throw ValidationError("holley_stroock_bound: negative input");
  }
  return cpi_base * std::exp(log_ratio_bound);
}

// TV(mu, pi)^2 <= (C_PI / 4) FI(mu || pi); returns the TV upper bound.
inline double fi_tv_bound(double cpi, double fi) {
  if (cpi < 0.0 || fi < 0.0) throw ValidationError("fi_tv_bound: negative input");
  return std::sqrt(cpi * fi / 4.0);
}

struct GradMomentBound {
  double moment = 0.0;  // E_mu |grad V|^2
  double fi = 0.0;      // FI(mu || pi)
  double bound = 0.0;   // fi + 2 beta d
  double slack = 0.0;   // bound - moment
};

// Checks E_mu[|grad V|^2] <= FI(mu || pi) + 2 beta d by quadrature, where
// pi is built from the potential on mu's grid.
inline GradMomentBound grad_second_moment_bound(const GridDensity1D& mu,
                                                const SmoothPotential& potential,
                                                double beta, int d = 1) {
  const GridDensity1D pi =
      grid_from_potential(potential, mu.lo(), mu.hi(), mu.n(),
                          std::numeric_limits<double>::infinity());
  GradMomentBound out;
  std::vector<double> integrand(static_cast<std::size_t>(mu.n()));
  for (int i = 0; i < mu.n(); ++i) {
    const double g = potential.at(mu.x(i)).grad[0];
    integrand[static_cast<std::size_t>(i)] = mu.values()[static_cast<std::size_t>(i)] * g * g;
  }
  out.moment = GridDensity1D::trapz(integrand, mu.spacing());
  out.fi = fisher_information(mu, pi);
  out.bound = out.fi + 2.0 * beta * d;
  out.slack = out.bound - out.moment;
  return out;
}

// Shape of the initialization KL bound: Delta + d (1 v log(beta m^2)), where
// m is the first absolute moment of the target. Companion tests check the
// measured KL(N(0, 1/beta) || pi) against a constant multiple of this.
inline double kl_init_bound(double delta, double beta, int d, double m) {
  if (!(m > 0.0)) throw ValidationError("kl_init_bound: m must be positive");
  if (delta < 0.0 || !(beta > 0.0) || d < 1) {
    throw ValidationError("kl_init_bound: bad arguments");
  }
  return delta + d * std::max(1.0, std::log(beta * m * m));
}

// Max over the grid of |d/dx ln(pi / pi Q_t)| - 6 beta sqrt(t) - 2 beta t |V'|,
// where V' is read off the density itself. A correct score perturbation bound
// makes this <= 0. Requires beta <= 1/(2t).
inline double score_perturbation_check(const GridDensity1D& pi, double t, double beta,
                                       double window = 1e-12) {
  if (t < 0.0) throw ValidationError("score_perturbation_check: negative t");
  if (t > 0.0 && beta > 0.5 / t) {
    throw ValidationError("score_perturbation_check: requires beta <= 1/(2t)");
  }
  if (t == 0.0) return 0.0;
  const GridDensity1D smoothed = convolve_gaussian(pi, t);
  const auto pv = pi.values();
  const auto qv = smoothed.values();
  const int n = pi.n();
  const double peak = *std::max_element(pv.begin(), pv.end());
  int i0 = 0, i1 = n - 1;
  while (i0 < n - 1 && (pv[static_cast<std::size_t>(i0)] <= window * peak ||
                        qv[static_cast<std::size_t>(i0)] <= window * peak)) ++i0;
  while (i1 > 0 && (pv[static_cast<std::size_t>(i1)] <= window * peak ||
                    qv[static_cast<std::size_t>(i1)] <= window * peak)) --i1;
  if (i1 - i0 < 2) throw ValidationError("score_perturbation_check: window too narrow");
  std::vector<double> logp(static_cast<std::size_t>(n), 0.0);
  std::vector<double> logdiff(static_cast<std::size_t>(n), 0.0);
  for (int i = i0; i <= i1; ++i) {
    const double p = std::max(pv[static_cast<std::size_t>(i)], detail::kDensityFloor);
    const double q = std::max(qv[static_cast<std::size_t>(i)], detail::kDensityFloor);
    logp[static_cast<std::size_t>(i)] = std::log(p);
    logdiff[static_cast<std::size_t>(i)] = std::log(p) - std::log(q);
  }
  const auto dlogp = detail::fd_derivative(logp, pi.spacing(), i0, i1);
  const auto score = detail::fd_derivative(logdiff, pi.spacing(), i0, i1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = i0; i <= i1; ++i) {
    const double grad_v = std::abs(dlogp[static_cast<std::size_t>(i)]);
    const double lhs = std::abs(score[static_cast<std::size_t>(i)]);
    worst = std::max(worst, lhs - 6.0 * beta * std::sqrt(t) - 2.0 * beta * t * grad_v);
  }
  return worst;
}

}  // namespace filab
