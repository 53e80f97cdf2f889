#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "filab/errors.hpp"
#include "filab/instance.hpp"
#include "filab/potential.hpp"
#include "filab/rng.hpp"
#include "filab/special.hpp"
#include "filab/vec.hpp"

namespace filab {

struct BudgetReport {
  std::uint64_t count = 0;
  std::optional<std::uint64_t> budget;
  std::optional<std::vector<Vec>> trace;
};

// Local oracle: returns (V(x), grad V(x)) and counts every call. All potential
// access inside the samplers goes through query(), so the count is exactly the
// number of evaluations an algorithm performed. One oracle serves one trial at
// a time; parallel trials use one oracle each.
class CountingOracle {
 public:
  explicit CountingOracle(SmoothPotential potential,
                          std::optional<std::uint64_t> budget = std::nullopt,
                          bool trace = false)
      : potential_(std::move(potential)), budget_(budget) {
    if (trace) trace_.emplace();
  }

  PotentialValue query(std::span<const double> x) {
    if (budget_ && count_ >= *budget_) throw BudgetExhausted(count_, *budget_);
    ++count_;
    if (trace_) trace_->emplace_back(x.begin(), x.end());
    return potential_(x);
  }

  std::uint64_t count() const { return count_; }
  std::optional<std::uint64_t> budget() const { return budget_; }
  int dim() const { return potential_.dim(); }
  double beta() const { return potential_.beta(); }

  BudgetReport report() const { return {count_, budget_, trace_}; }

 private:
  SmoothPotential potential_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t count_ = 0;
  std::optional<std::vector<Vec>> trace_;
};

inline BudgetReport budget_report(const CountingOracle& oracle) { return oracle.report(); }

// Initialization oracle: free samples from mu_0 with declared KL bound K0 and,
// for the stronger (warm start) form, a sup-log-ratio bound M0. The density
// evaluator is exposed to diagnostics and envelope construction only, never to
// samplers claiming to work in the weak model.
struct InitOracle {
  std::function<Vec(Rng&)> sampler;
  std::function<double(std::span<const double>)> density;  // may be empty
  double kl_bound = 0.0;                                   // K0
  std::optional<double> sup_log_ratio;                     // M0
};

inline Vec draw_init(const InitOracle& init, Rng& rng) { return init.sampler(rng); }

// Exact sampler for the null measure pi_init (flat on B_R, Gaussian-type
// radial tail outside). The ball branch draws radius R U^{1/d}; the tail
// branch draws s >= 0 with density proportional to (s+R)^{d-1} e^{-s^2/2} by
// rejection: propose from the truncated Gaussian N((d-1)/R, 1) on s >= 0 and
// accept with probability ((1+s/R) e^{-s/R})^{d-1} <= 1 (since 1+u <= e^u).
class PiInitSampler {
 public:
  PiInitSampler(int d, double R) : d_(d), R_(R) {
    if (!(R > 0.0)) throw ValidationError("PiInitSampler: R must be positive");
    z_init_ = mass_balance_g(d, R);
    p_ball_ = unit_ball_volume(d) * std::pow(R, d) / z_init_;
  }

  Vec operator()(Rng& rng) const {
    double radius;
    if (rng.uniform() < p_ball_) {
      radius = R_ * std::pow(rng.uniform(), 1.0 / d_);
    } else {
      radius = R_ + tail_excess(rng);
    }
    Vec dir = rng.unit_vec(d_);
    scale(dir, radius);
    return dir;
  }

  double density(std::span<const double> x) const {
    return std::exp(-init_potential_eval(d_, R_, x).value) / z_init_;
  }

  double z_init() const { return z_init_; }
  double ball_probability() const { return p_ball_; }

  // Acceptance weight of the tail proposal; public so tests can check <= 1.
  double tail_accept_weight(double s) const {
    const double u = s / R_;
    return std::pow((1.0 + u) * std::exp(-u), d_ - 1);
  }

 private:
  double tail_excess(Rng& rng) const {
    const double mean = (d_ - 1) / R_;
    for (;;) {
      double s = mean + rng.gaussian();
      while (s < 0.0) s = mean + rng.gaussian();
      if (rng.uniform() <= tail_accept_weight(s)) return s;
    }
  }

  int d_;
  double R_;
  double z_init_ = 0.0;
  double p_ball_ = 0.0;
};

inline Vec sample_pi_init(int d, double R, Rng& rng) { return PiInitSampler(d, R)(rng); }

// Init oracle bound to an instance family. K0 = log 2 is valid for every
// pi_omega by the construction; M0 = max(r^2 phi(0), log 2) covers both sides
// of the density ratio, since pi_omega/pi_init lies in [Z_init/Z_omega,
// exp(r^2 phi(0))] pointwise and Z_omega <= 2 Z_init.
inline InitOracle make_pi_init_oracle(const BumpInstance& inst) {
  auto sampler = std::make_shared<PiInitSampler>(inst.d, inst.R);
  InitOracle init;
  init.sampler = [sampler](Rng& rng) { return (*sampler)(rng); };
  init.density = [sampler](std::span<const double> x) { return sampler->density(x); };
  init.kl_bound = std::log(2.0);
  init.sup_log_ratio = std::max(inst.bump_height(), std::log(2.0));
  return init;
}

inline InitOracle make_gaussian_init_oracle(int d, double variance, double kl_bound) {
  const double sd = std::sqrt(variance);
  InitOracle init;
  init.sampler = [d, sd](Rng& rng) {
    Vec v = rng.gaussian_vec(d);
    scale(v, sd);
    return v;
  };
  init.density = [d, variance](std::span<const double> x) {
    const double log_norm = -0.5 * d * std::log(2.0 * std::numbers::pi * variance);
    return std::exp(log_norm - 0.5 * sqnorm(x) / variance);
  };
  init.kl_bound = kl_bound;
  return init;
}

}  // namespace filab
