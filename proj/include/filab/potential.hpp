#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <utility>

#include "filab/errors.hpp"
#include "filab/vec.hpp"

namespace filab {

struct PotentialValue {
  double value = 0.0;
  Vec grad;
};

// A potential V with declared dimension and smoothness constant beta
// (|grad V(x) - grad V(y)| <= beta |x - y|; audited, not enforced per call).
class SmoothPotential {
 public:
  using Evaluator = std::function<PotentialValue(std::span<const double>)>;

  SmoothPotential() = default;
  SmoothPotential(int dim, double beta, Evaluator eval)
      : dim_(dim), beta_(beta), eval_(std::move(eval)) {}

  int dim() const { return dim_; }
  double beta() const { return beta_; }

  PotentialValue operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) {
      throw DimensionMismatch(static_cast<std::size_t>(dim_), x.size());
    }
    return eval_(x);
  }

  // Convenience for 1-D potentials.
  PotentialValue at(double x) const {
    const double xs[1] = {x};
    return (*this)(std::span<const double>(xs, 1));
  }

 private:
  int dim_ = 0;
  double beta_ = 0.0;
  Evaluator eval_;
};

// V_b(x) = V(x / sqrt(b)); grad V_b(x) = b^{-1/2} grad V(x / sqrt(b)).
// A beta-smooth input rescaled with b = beta becomes 1-smooth.
inline SmoothPotential rescale(const SmoothPotential& potential, double beta) {
  if (!(beta > 0.0)) throw ValidationError("rescale: beta must be positive");
  const double root = std::sqrt(beta);
  return SmoothPotential(
      potential.dim(), potential.beta() / beta,
      [potential, root](std::span<const double> x) {
        Vec y(x.begin(), x.end());
        scale(y, 1.0 / root);
        PotentialValue pv = potential(y);
        scale(pv.grad, 1.0 / root);
        return pv;
      });
}

// beta * V; the tilted target pi_beta is proportional to exp(-beta V).
inline SmoothPotential tilt(const SmoothPotential& potential, double beta) {
  if (!(beta > 0.0)) throw ValidationError("tilt: beta must be positive");
  return SmoothPotential(potential.dim(), potential.beta() * beta,
                         [potential, beta](std::span<const double> x) {
                           PotentialValue pv = potential(x);
                           pv.value *= beta;
                           scale(pv.grad, beta);
                           return pv;
                         });
}

// V + c: the oracle's additive-constant freedom, exercised in tests.
inline SmoothPotential shift(const SmoothPotential& potential, double c) {
  return SmoothPotential(potential.dim(), potential.beta(),
                         [potential, c](std::span<const double> x) {
                           PotentialValue pv = potential(x);
                           pv.value += c;
                           return pv;
                         });
}

inline SmoothPotential quadratic_potential(int dim) {
  return SmoothPotential(dim, 1.0, [](std::span<const double> x) {
    PotentialValue pv;
    pv.value = 0.5 * sqnorm(x);
    pv.grad.assign(x.begin(), x.end());
    return pv;
  });
}

// Shipped 1-smooth test potential V(x) = (x-a)^2/4 - cos(x-a)/2, with
// V'' = 1/2 + cos(x-a)/2 in [0, 1] and global minimum at x = a.
inline SmoothPotential cosine_well_potential(double a = 0.0) {
  return SmoothPotential(1, 1.0, [a](std::span<const double> x) {
    const double u = x[0] - a;
    PotentialValue pv;
    pv.value = 0.25 * u * u - 0.5 * std::cos(u);
    pv.grad = {0.5 * u + 0.5 * std::sin(u)};
    return pv;
  });
}

}  // namespace filab
