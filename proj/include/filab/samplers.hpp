#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "filab/errors.hpp"
#include "filab/instance.hpp"
#include "filab/oracle.hpp"
#include "filab/potential.hpp"
#include "filab/quadrature.hpp"
#include "filab/rng.hpp"
#include "filab/vec.hpp"

namespace filab {

// k Langevin updates X <- X - h grad V(X) + sqrt(2h) xi; exactly k queries.
inline Vec lmc_chain(CountingOracle& oracle, Vec x, double h, std::uint64_t k, Rng& rng) {
  if (!(h > 0.0)) throw ValidationError("lmc_chain: h must be positive");
  const double noise = std::sqrt(2.0 * h);
  for (std::uint64_t i = 0; i < k; ++i) {
    const PotentialValue pv = oracle.query(x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] += -h * pv.grad[j] + noise * rng.gaussian();
    }
  }
  return x;
}

// Averaged LMC: draw t uniform on [0, Nh], run floor(t/h) full steps from a
// free initialization draw, then one partial step of length t - kh. Consumes
// k queries, plus one for the partial step when t - kh > 0; if t lands
// exactly on a grid point the state X_{kh} is returned with no extra query.
inline Vec averaged_lmc_sample(CountingOracle& oracle, const InitOracle& init, double h,
                               std::uint64_t N, Rng& rng) {
  if (N < 1) throw ValidationError("averaged_lmc_sample: N must be >= 1");
  if (!(h > 0.0)) throw ValidationError("averaged_lmc_sample: h must be positive");
  const double t = rng.uniform() * static_cast<double>(N) * h;
  const auto k = static_cast<std::uint64_t>(t / h);
  Vec x = draw_init(init, rng);
  x = lmc_chain(oracle, std::move(x), h, k, rng);
  const double tau = t - static_cast<double>(k) * h;
  if (tau > 0.0) {
    const PotentialValue pv = oracle.query(x);
    const double noise = std::sqrt(2.0 * tau);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] += -tau * pv.grad[j] + noise * rng.gaussian();
    }
  }
  return x;
}

struct DescentResult {
  Vec best_point;
  double min_grad_norm = 0.0;
};

// T steps of x <- x - eta grad V(x); returns the iterate with the smallest
// observed gradient norm (the comparison of record is about stationarity, not
// function value). T queries.
inline DescentResult gradient_descent(CountingOracle& oracle, Vec x, double eta,
                                      std::uint64_t T) {
  if (T < 1) throw ValidationError("gradient_descent: T must be >= 1");
  DescentResult out{x, std::numeric_limits<double>::infinity()};
  for (std::uint64_t t = 0; t < T; ++t) {
    const PotentialValue pv = oracle.query(x);
    const double gn = norm(pv.grad);
    if (gn < out.min_grad_norm) {
      out.min_grad_norm = gn;
      out.best_point = x;
    }
    axpy(-eta, pv.grad, x);
  }
  return out;
}

// N(x, beta^{-1} I_d); zero queries.
inline Vec stationary_gaussian_sample(std::span<const double> x, double beta, Rng& rng) {
  if (!(beta > 0.0)) throw ValidationError("stationary_gaussian_sample: beta must be positive");
  Vec out(x.begin(), x.end());
  const double sd = 1.0 / std::sqrt(beta);
  for (double& v : out) v += sd * rng.gaussian();
  return out;
}

// Heat flow Q_t: x + sqrt(t) xi.
inline Vec heat_postprocess(std::span<const double> x, double t, Rng& rng) {
  if (t < 0.0) throw ValidationError("heat_postprocess: negative t");
  Vec out(x.begin(), x.end());
  const double sd = std::sqrt(t);
  for (double& v : out) v += sd * rng.gaussian();
  return out;
}

// Upper envelope for rejection sampling: an unnormalized density mu-tilde
// dominating pi-tilde (normalized so pi-tilde(0) = 1), an exact sampler for
// mu = mu-tilde / Z_mu, and a known bound on Z_mu / Z_pi. v_ref is the
// potential value observed at 0, fixing the additive-constant convention.
struct Envelope {
  std::function<double(std::span<const double>)> log_density;
  std::function<Vec(Rng&)> sampler;
  double ratio_bound = 1.0;
  std::optional<double> v_ref;
  std::uint64_t build_queries = 0;
};

struct RejectionResult {
  Vec point;
  bool accepted = false;
  std::uint64_t trials = 0;
};

// Rejection sampling against the envelope. One counted query per trial; if
// the envelope does not carry a normalization value, one extra query at 0
// fixes pi-tilde(0) = 1 first. On exhaustion the output is a fresh envelope
// draw flagged accepted = false, so the output law is (1-p) pi + p mu.
inline RejectionResult rejection_sample(CountingOracle& oracle, const Envelope& envelope,
                                        std::uint64_t max_iter, Rng& rng) {
  if (max_iter < 1) throw ValidationError("rejection_sample: max_iter must be >= 1");
  double v0;
  if (envelope.v_ref) {
    v0 = *envelope.v_ref;
  } else {
    const Vec zero(static_cast<std::size_t>(oracle.dim()), 0.0);
    v0 = oracle.query(zero).value;
  }
  for (std::uint64_t t = 1; t <= max_iter; ++t) {
    Vec x = envelope.sampler(rng);
    const double vx = oracle.query(x).value;
    const double log_accept = -(vx - v0) - envelope.log_density(x);
    if (log_accept > 1e-9) {
      throw EnvelopeViolation("rejection_sample: acceptance ratio exceeds 1 at a sample");
    }
    if (std::log(std::max(rng.uniform(), 1e-300)) <= log_accept) {
      return {std::move(x), true, t};
    }
  }
  return {envelope.sampler(rng), false, max_iter};
}

// Warm-start envelope from an initialization oracle with a declared
// sup-log-ratio bound M0: mu0-tilde = exp(2 M0) mu0 / mu0(0) dominates
// pi-tilde, with Z_mu0 / Z_pi <= exp(3 M0). One query (at 0) to fix the
// normalization.
inline Envelope warm_start_envelope(const InitOracle& init, CountingOracle& oracle) {
  if (!init.density) {
    throw ValidationError("warm_start_envelope: init oracle has no density evaluator");
  }
  if (!init.sup_log_ratio) {
    throw ValidationError("warm_start_envelope: init oracle has no declared M0");
  }
  const double m0 = *init.sup_log_ratio;
  const Vec zero(static_cast<std::size_t>(oracle.dim()), 0.0);
  const double v0 = oracle.query(zero).value;
  const double log_mu0_at_0 = std::log(init.density(zero));
  Envelope env;
  env.log_density = [density = init.density, m0, log_mu0_at_0](std::span<const double> x) {
    return 2.0 * m0 - log_mu0_at_0 + std::log(std::max(density(x), 1e-300));
  };
  env.sampler = init.sampler;
  env.ratio_bound = std::exp(3.0 * m0);
  env.v_ref = v0;
  env.build_queries = 1;
  return env;
}

namespace detail {

// Exact sampler for exp(-Vhat) where Vhat is the 1-net minorant inside B_R
// and the exact quadratic tail outside. Pieces: one interval per net cell
// (density proportional to exp((u-g)^2/2) on the cell, sampled by rejection
// from the uniform) and the two Gaussian tails.
class GridEnvelopeSampler {
 public:
  struct Cell {
    double z, g, c;      // site, gradient, value of (V(z) - v0)
    double u0, u1;       // cell extent relative to z
    double mass;
    double peak_exponent;
  };

  GridEnvelopeSampler(std::vector<Cell> cells, double R) : cells_(std::move(cells)), R_(R) {
    const double tail_each = std::sqrt(0.5 * std::numbers::pi);
    masses_.reserve(cells_.size() + 2);
    for (const Cell& c : cells_) masses_.push_back(c.mass);
    masses_.push_back(tail_each);  // right tail
    masses_.push_back(tail_each);  // left tail
    total_ = 0.0;
    for (double m : masses_) total_ += m;
  }

  Vec operator()(Rng& rng) const {
    double u = rng.uniform() * total_;
    std::size_t idx = 0;
    while (idx + 1 < masses_.size() && u > masses_[idx]) {
      u -= masses_[idx];
      ++idx;
    }
    if (idx < cells_.size()) {
      const Cell& c = cells_[idx];
      for (;;) {
        const double v = c.u0 + (c.u1 - c.u0) * rng.uniform();
        const double e = 0.5 * (v - c.g) * (v - c.g);
        if (std::log(std::max(rng.uniform(), 1e-300)) <= e - c.peak_exponent) {
          return {c.z + v};
        }
      }
    }
    const double s = std::abs(rng.gaussian());
    return {idx == cells_.size() ? R_ + s : -(R_ + s)};
  }

 private:
  std::vector<Cell> cells_;
  double R_;
  std::vector<double> masses_;
  double total_ = 0.0;
};

}  // namespace detail

// Envelope for targets in normal form (V(0) = 0, exact quadratic tail outside
// B_R, 1-smooth): queries a 1-net of B_R plus the normalization point and
// builds the smoothness minorant Vhat(x) = V(z) + <grad V(z), x-z> - |x-z|^2/2
// inside B_R, exact tail outside. Z_mu / Z_pi <= e. The exact sampler is
// implemented for d = 1; consumes |net| + 1 queries.
inline Envelope grid_envelope(CountingOracle& oracle, int d, double R,
                              std::size_t max_net = 1u << 20) {
  if (d != 1) throw ValidationError("grid_envelope: exact sampler implemented for d = 1 only");
  if (!(R > 0.0)) throw ValidationError("grid_envelope: R must be positive");
  const double delta = 1.0;
  const auto K = static_cast<long>(std::ceil(R / delta));
  const std::size_t net_size = 2 * static_cast<std::size_t>(K + 1);
  if (net_size > max_net) throw ValidationError("grid_envelope: net size exceeds guard");

  const Vec zero(1, 0.0);
  const double v0 = oracle.query(zero).value;

  struct Site {
    double z, v, g;
  };
  std::vector<Site> sites;
  sites.reserve(net_size);
  for (long k = -K - 1; k <= K; ++k) {
    const double z = (static_cast<double>(k) + 0.5) * delta;  // offset so 0 is not a site
    const Vec point{z};
    const PotentialValue pv = oracle.query(point);
    sites.push_back({z, pv.value - v0, pv.grad[0]});
  }

  auto vhat = [sites, R, delta](double x) {
    if (std::abs(x) >= R) {
      const double excess = std::abs(x) - R;
      return 0.5 * excess * excess;
    }
    // nearest site of the half-offset lattice
    auto idx = static_cast<long>(std::floor(x / delta)) + static_cast<long>(sites.size()) / 2;
    idx = std::max(0L, std::min(static_cast<long>(sites.size()) - 1, idx));
    const double u = x - sites[static_cast<std::size_t>(idx)].z;
    const auto& s = sites[static_cast<std::size_t>(idx)];
    return s.v + s.g * u - 0.5 * u * u;
  };

  std::vector<detail::GridEnvelopeSampler::Cell> cells;
  for (const Site& s : sites) {
    const double lo = std::max(s.z - 0.5 * delta, -R);
    const double hi = std::min(s.z + 0.5 * delta, R);
    if (!(hi > lo)) continue;
    detail::GridEnvelopeSampler::Cell cell;
    cell.z = s.z;
    cell.g = s.g;
    cell.c = s.v;
    cell.u0 = lo - s.z;
    cell.u1 = hi - s.z;
    cell.peak_exponent = std::max(0.5 * (cell.u0 - s.g) * (cell.u0 - s.g),
                                  0.5 * (cell.u1 - s.g) * (cell.u1 - s.g));
    // exp(-Vhat(z+u)) = exp(-v - g^2/2) exp((u-g)^2/2)
    const double base = std::exp(-s.v - 0.5 * s.g * s.g);
    cell.mass = base * integrate(
        [&](double u) { return std::exp(0.5 * (u - s.g) * (u - s.g)); },
        cell.u0, cell.u1, {.rel_tol = 1e-12});
    cells.push_back(cell);
  }

  Envelope env;
  env.log_density = [vhat](std::span<const double> x) { return -vhat(x[0]); };
  env.sampler = [sampler = std::make_shared<detail::GridEnvelopeSampler>(std::move(cells), R)](
                    Rng& rng) { return (*sampler)(rng); };
  env.ratio_bound = std::numbers::e;
  env.v_ref = v0;
  env.build_queries = net_size + 1;
  return env;
}

// Exact pi_omega sampler by rejection from pi_init with envelope constant
// exp(r^2 phi(0)) (pi_omega-tilde <= exp(r^2 phi(0)) pi_init-tilde pointwise).
// Test utility: touches the instance directly, no oracle involved.
class ExactTargetSampler {
 public:
  explicit ExactTargetSampler(const BumpInstance& inst, double max_expected_trials = 1e6)
      : inst_(inst), init_(inst.d, inst.R) {
    if (std::exp(inst.bump_height()) > max_expected_trials) {
      throw NumericError("ExactTargetSampler: expected trial count exceeds guard");
    }
  }

  Vec operator()(Rng& rng) const {
    const double height = inst_.bump_height();
    const Vec& w = inst_.omega();
    for (;;) {
      Vec x = init_(rng);
      const double s = dist(x, w) / inst_.r;
      const double log_accept = inst_.r * inst_.r * inst_.profile.eval(s).phi - height;
      if (std::log(std::max(rng.uniform(), 1e-300)) <= log_accept) return x;
    }
  }

 private:
  BumpInstance inst_;
  PiInitSampler init_;
};

inline Vec exact_target_sample(const BumpInstance& inst, Rng& rng) {
  return ExactTargetSampler(inst)(rng);
}

}  // namespace filab
