#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "filab/errors.hpp"
#include "filab/potential.hpp"
#include "filab/rng.hpp"

namespace filab {

// Discretized probability density on a uniform 1-D grid; the ground-truth
// representation for law tracking. Values are kept normalized to unit
// trapezoidal mass.
class GridDensity1D {
 public:
  GridDensity1D(double lo, double hi, std::vector<double> values)
      : lo_(lo), hi_(hi), v_(std::move(values)) {
    if (v_.size() < 3) throw ValidationError("GridDensity1D: need at least 3 points");
    if (!(hi > lo)) throw ValidationError("GridDensity1D: hi must exceed lo");
    spacing_ = (hi_ - lo_) / static_cast<double>(v_.size() - 1);
    for (double& x : v_) {
      if (x < 0.0) {
        if (x < -1e-12) throw ValidationError("GridDensity1D: negative density value");
        x = 0.0;
      }
    }
    normalize();
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double spacing() const { return spacing_; }
  int n() const { return static_cast<int>(v_.size()); }
  std::span<const double> values() const { return v_; }
  double x(int i) const { return lo_ + spacing_ * i; }

  double value_at(double x) const {
    if (x <= lo_ || x >= hi_) return 0.0;
    const double t = (x - lo_) / spacing_;
    const auto i = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(i);
    return v_[i] * (1.0 - frac) + v_[i + 1] * frac;
  }

  double mass() const { return trapz(v_, spacing_); }

  double mean() const {
    std::vector<double> integrand(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) integrand[i] = x(static_cast<int>(i)) * v_[i];
    return trapz(integrand, spacing_);
  }

  double variance() const {
    const double m = mean();
    std::vector<double> integrand(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const double c = x(static_cast<int>(i)) - m;
      integrand[i] = c * c * v_[i];
    }
    return trapz(integrand, spacing_);
  }

  // CDF at the grid nodes by cumulative trapezoid, clamped into [0, 1].
  std::vector<double> cdf() const {
    std::vector<double> out(v_.size(), 0.0);
    for (std::size_t i = 1; i < v_.size(); ++i) {
      out[i] = out[i - 1] + 0.5 * spacing_ * (v_[i - 1] + v_[i]);
    }
    for (double& c : out) c = std::min(c, 1.0);
    return out;
  }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("GridDensity1D::write_csv: cannot open " + path);
    out << "x,density\n";
    char buf[64];
    for (std::size_t i = 0; i < v_.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", x(static_cast<int>(i)), v_[i]);
      out << buf;
    }
  }

  static double trapz(std::span<const double> v, double spacing) {
    double s = 0.0;
    for (double x : v) s += x;
    s -= 0.5 * (v.front() + v.back());
    return s * spacing;
  }

 private:
  void normalize() {
    const double m = mass();
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw NumericError("GridDensity1D: non-normalizable values");
    }
    for (double& x : v_) x /= m;
  }

  double lo_, hi_, spacing_;
  std::vector<double> v_;
};

// exp(-V) on a uniform grid, normalized. Fails if the boundary values carry
// more than boundary_tol of the peak (domain too small); pass infinity to
// allow compactly supported shapes like the uniform density.
inline GridDensity1D grid_from_potential(const SmoothPotential& potential, double lo,
                                         double hi, int n, double boundary_tol = 1e-12) {
  if (potential.dim() != 1) throw ValidationError("grid_from_potential: 1-D only");
  if (n < 3) throw ValidationError("grid_from_potential: need n >= 3");
  const double spacing = (hi - lo) / (n - 1);
  std::vector<double> vals(static_cast<std::size_t>(n));
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = potential.at(lo + spacing * i).value;
    vmin = std::min(vmin, vals[static_cast<std::size_t>(i)]);
  }
  double peak = 0.0;
  for (double& v : vals) {
    v = std::exp(-(v - vmin));
    peak = std::max(peak, v);
  }
  if (vals.front() > boundary_tol * peak || vals.back() > boundary_tol * peak) {
    throw ValidationError("grid_from_potential: domain too small (boundary mass)");
  }
  return GridDensity1D(lo, hi, std::move(vals));
}

// Direct O(n*k) convolution with a centered Gaussian of the given variance,
// kernel truncated at 12 standard deviations. Throws if the mass lost to
// truncation and boundary leakage exceeds drift_tol.
inline GridDensity1D convolve_gaussian(const GridDensity1D& g, double variance,
                                       double drift_tol = 1e-6) {
  if (!(variance >= 0.0)) throw ValidationError("convolve_gaussian: negative variance");
  if (variance == 0.0) return g;
  const double h = g.spacing();
  const double sd = std::sqrt(variance);
  const int k = std::max(1, static_cast<int>(std::ceil(12.0 * sd / h)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * k + 1));
  const double norm_c = 1.0 / (sd * std::numbers::sqrt2 * std::sqrt(std::numbers::pi));
  for (int j = -k; j <= k; ++j) {
    const double u = j * h;
    kernel[static_cast<std::size_t>(j + k)] = norm_c * std::exp(-0.5 * u * u / variance);
  }
  const auto p = g.values();
  const int n = g.n();
  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int j0 = std::max(0, i - k);
    const int j1 = std::min(n - 1, i + k);
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) {
      double w = p[static_cast<std::size_t>(j)];
      if (j == 0 || j == n - 1) w *= 0.5;
      acc += w * kernel[static_cast<std::size_t>(j - i + k)];
    }
    q[static_cast<std::size_t>(i)] = acc * h;
  }
  const double drift = std::abs(GridDensity1D::trapz(q, h) - 1.0);
  if (drift > drift_tol) {
    throw NumericError("convolve_gaussian: mass drift " + std::to_string(drift) +
                       " exceeds tolerance (domain too narrow?)");
  }
  return GridDensity1D(g.lo(), g.hi(), std::move(q));
}

namespace detail {

// Pushforward of a grid density through the monotone drift map
// T(z) = z - tau * V'(z): q(y) = p(T^{-1}(y)) * (T^{-1})'(y). The inverse and
// its derivative are tabulated once per node by bisection and reused across
// steps.
class DriftPushforward {
 public:
  DriftPushforward(const SmoothPotential& potential, const GridDensity1D& shape, double tau)
      : n_(shape.n()) {
    z_.resize(static_cast<std::size_t>(n_));
    jac_.resize(static_cast<std::size_t>(n_));
    const auto T = [&](double z) { return z - tau * potential.at(z).grad[0]; };
    for (int i = 0; i < n_; ++i) {
      const double y = shape.x(i);
      double b = std::max(1.0, 4.0 * shape.spacing());
      int tries = 0;
      while (!(T(y - b) <= y && T(y + b) >= y)) {
        b *= 2.0;
        if (++tries > 60) throw NumericError("drift map inversion: no bracket");
      }
      double lo = y - b, hi = y + b;
      for (int it = 0; it < 90 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(y)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (T(mid) < y) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      z_[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
    }
    for (int i = 1; i + 1 < n_; ++i) {
      const double dz = z_[static_cast<std::size_t>(i + 1)] - z_[static_cast<std::size_t>(i - 1)];
      if (!(dz > 0.0)) {
        throw ValidationError("drift map is not strictly increasing (step size too large)");
      }
      jac_[static_cast<std::size_t>(i)] = dz / (2.0 * shape.spacing());
    }
    jac_[0] = (z_[1] - z_[0]) / shape.spacing();
    jac_[static_cast<std::size_t>(n_ - 1)] =
        (z_[static_cast<std::size_t>(n_ - 1)] - z_[static_cast<std::size_t>(n_ - 2)]) /
        shape.spacing();
  }

  std::vector<double> apply(const GridDensity1D& p) const {
    std::vector<double> q(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      q[static_cast<std::size_t>(i)] =
          p.value_at(z_[static_cast<std::size_t>(i)]) * jac_[static_cast<std::size_t>(i)];
    }
    return q;
  }

 private:
  int n_;
  std::vector<double> z_;    // T^{-1} at the grid nodes
  std::vector<double> jac_;  // (T^{-1})' at the grid nodes
};

}  // namespace detail

// Law-level realization of the discrete Langevin update
// X <- X - h V'(X) + sqrt(2h) xi: drift pushforward followed by Gaussian
// convolution of variance 2h. Requires h * beta < 1 so the drift map is
// strictly increasing (invertible).
class LmcLawEvolver {
 public:
  LmcLawEvolver(const SmoothPotential& potential, GridDensity1D law, double h,
                double drift_tol = 1e-6)
      : law_(std::move(law)), h_(h), drift_tol_(drift_tol),
        push_(check(potential, h), law_, h) {}

  void step() {
    law_ = GridDensity1D(law_.lo(), law_.hi(), push_.apply(law_));
    law_ = convolve_gaussian(law_, 2.0 * h_, drift_tol_);
  }

  const GridDensity1D& law() const { return law_; }

 private:
  static const SmoothPotential& check(const SmoothPotential& potential, double h) {
    if (potential.dim() != 1) throw ValidationError("LmcLawEvolver: 1-D only");
    if (!(h > 0.0)) throw ValidationError("LmcLawEvolver: h must be positive");
    if (std::isfinite(potential.beta()) && h * potential.beta() >= 1.0) {
      throw ValidationError("LmcLawEvolver: h * beta >= 1, drift map may fold");
    }
    return potential;
  }

  GridDensity1D law_;
  double h_;
  double drift_tol_;
  detail::DriftPushforward push_;
};

// Laws [mu_0, mu_h, ..., mu_{steps h}]; index k holds the law after k steps.
inline std::vector<GridDensity1D> evolve_lmc_law(const SmoothPotential& potential,
                                                 const GridDensity1D& mu0, double h,
                                                 int steps, double drift_tol = 1e-6) {
  if (steps < 0) throw ValidationError("evolve_lmc_law: steps must be >= 0");
  std::vector<GridDensity1D> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(mu0);
  LmcLawEvolver ev(potential, mu0, h, drift_tol);
  for (int k = 0; k < steps; ++k) {
    ev.step();
    out.push_back(ev.law());
  }
  return out;
}

// Uniform-in-time mixture over [0, Nh] of the supplied laws (laws[k] is the
// law at time kh). refinement = 0 uses the trapezoid rule in time over the
// grid laws; refinement >= 1 subdivides each step into that many partial
// times tau = (j + 1/2) h / refinement, each realized by a drift of length
// tau followed by convolution with variance 2 tau.
inline GridDensity1D averaged_law(const std::vector<GridDensity1D>& laws,
                                  const SmoothPotential& potential, double h,
                                  int refinement = 0, double drift_tol = 1e-6) {
  if (laws.empty()) throw ValidationError("averaged_law: empty list");
  if (laws.size() == 1) return laws.front();
  const std::size_t N = laws.size() - 1;
  const int n = laws.front().n();
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  if (refinement <= 0) {
    for (std::size_t k = 0; k <= N; ++k) {
      const double w = (k == 0 || k == N) ? 0.5 : 1.0;
      const auto v = laws[k].values();
      for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)] += w * v[static_cast<std::size_t>(i)];
    }
  } else {
    for (int j = 0; j < refinement; ++j) {
      const double tau = (j + 0.5) * h / refinement;
      detail::DriftPushforward push(potential, laws.front(), tau);
      for (std::size_t k = 0; k < N; ++k) {
        GridDensity1D moved(laws[k].lo(), laws[k].hi(), push.apply(laws[k]));
        moved = convolve_gaussian(moved, 2.0 * tau, drift_tol);
        const auto v = moved.values();
        for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
      }
    }
  }
  return GridDensity1D(laws.front().lo(), laws.front().hi(), std::move(acc));
}

// Streaming variant: evolves N steps and accumulates the mixture without
// storing the whole trajectory of laws.
inline GridDensity1D averaged_law_evolve(const SmoothPotential& potential,
                                         const GridDensity1D& mu0, double h, int N,
                                         int refinement = 1, double drift_tol = 1e-6) {
  if (N < 1) throw ValidationError("averaged_law_evolve: N must be >= 1");
  const int n = mu0.n();
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  LmcLawEvolver ev(potential, mu0, h, drift_tol);
  std::vector<detail::DriftPushforward> partial;
  std::vector<double> taus;
  if (refinement <= 0) {
    // trapezoid in time over grid laws
  } else {
    for (int j = 0; j < refinement; ++j) {
      const double tau = (j + 0.5) * h / refinement;
      taus.push_back(tau);
      partial.emplace_back(potential, mu0, tau);
    }
  }
  const auto add = [&](const GridDensity1D& g, double w) {
    const auto v = g.values();
    for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)] += w * v[static_cast<std::size_t>(i)];
  };
  for (int k = 0; k < N; ++k) {
    if (refinement <= 0) {
      add(ev.law(), (k == 0) ? 0.5 : 1.0);
    } else {
      for (std::size_t j = 0; j < partial.size(); ++j) {
        GridDensity1D moved(mu0.lo(), mu0.hi(), partial[j].apply(ev.law()));
        moved = convolve_gaussian(moved, 2.0 * taus[j], drift_tol);
        add(moved, 1.0);
      }
    }
    ev.step();
  }
  if (refinement <= 0) add(ev.law(), 0.5);
  return GridDensity1D(mu0.lo(), mu0.hi(), std::move(acc));
}

// Inverse-CDF sampler over a grid density; caches the CDF.
class GridSampler {
 public:
  explicit GridSampler(const GridDensity1D& g) : g_(g), cdf_(g.cdf()) {}

  double operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return g_.lo();
    if (it == cdf_.end()) return g_.hi();
    const auto i = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
    return g_.x(static_cast<int>(i - 1)) + frac * g_.spacing();
  }

 private:
  const GridDensity1D& g_;
  std::vector<double> cdf_;
};

inline double sample_from_grid(const GridDensity1D& g, Rng& rng) {
  return GridSampler(g)(rng);
}

// Two-sided Kolmogorov-Smirnov statistic of samples against a grid law.
inline double ks_distance(std::vector<double> samples, const GridDensity1D& g) {
  if (samples.empty()) throw ValidationError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const auto cdf = g.cdf();
  const auto F = [&](double x) {
    if (x <= g.lo()) return 0.0;
    if (x >= g.hi()) return 1.0;
    const double t = (x - g.lo()) / g.spacing();
    const auto i = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(i);
    return cdf[i] * (1.0 - frac) + cdf[i + 1] * frac;
  };
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double fx = F(samples[i]);
    d = std::max(d, std::abs(fx - static_cast<double>(i) / n));
    d = std::max(d, std::abs(fx - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace filab
