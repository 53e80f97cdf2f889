#pragma once

#include <cmath>

#include "filab/errors.hpp"

namespace filab {

// Fano identification bound: with M hypotheses and N binary-information
// queries, Pr{miss} >= 1 - ((4N/M) ln(M/2) + ln 2) / ln M; returned clamped
// to [0, 1].
inline double fano_bound(long M, long N) {
  if (M < 4) throw ValidationError("fano_bound: requires M >= 4");
  if (N < 0) throw ValidationError("fano_bound: requires N >= 0");
  const double m = static_cast<double>(M);
  const double bound =
      1.0 - ((4.0 * static_cast<double>(N) / m) * std::log(m / 2.0) + std::log(2.0)) /
                std::log(m);
  return std::max(0.0, std::min(1.0, bound));
}

// Regime guard for the packing bound: it is vacuous unless eps is
// exponentially small in d (log(1/eps) >= c_eps * d).
inline bool packing_bound_nontrivial(int d, double eps, double c_eps = 2.0) {
  return std::log(1.0 / eps) >= c_eps * d;
}

// Packing-number lower bound (c d / log(1/eps))^{d/2} * eps^{-2d/(d+2)} with a
// configured constant c.
inline double packing_count_bound(int d, double eps, double c = 1.0, double c_eps = 2.0) {
  if (d < 1) throw ValidationError("packing_count_bound: d must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("packing_count_bound: eps must lie in (0, 1)");
  }
  const double log_inv = std::log(1.0 / eps);
  if (!packing_bound_nontrivial(d, eps, c_eps)) {
    throw ValidationError("packing_count_bound: eps outside the regime for this d");
  }
  return std::pow(c * d / log_inv, 0.5 * d) * std::pow(eps, -2.0 * d / (d + 2.0));
}

// Sharpened univariate bound c / (eps sqrt(log(1/eps))), from the improved
// 1-D Poincare route.
inline double packing_count_bound_1d_sharp(double eps, double c = 1.0) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("packing_count_bound_1d_sharp: eps must lie in (0, 1)");
  }
  return c / (eps * std::sqrt(std::log(1.0 / eps)));
}

// Smallest integer d >= 2 with d^2 ln d >= 8 ln(1/eps): the dimension that
// optimizes the embedded packing bound; asymptotically
// d ~ sqrt(log(1/eps) / loglog(1/eps)).
inline int optimal_embed_dim(double eps, double threshold = 0.5) {
  if (!(eps > 0.0)) throw ValidationError("optimal_embed_dim: eps must be positive");
  if (eps >= threshold) {
    throw ValidationError("optimal_embed_dim: eps above regime threshold");
  }
  const double target = 8.0 * std::log(1.0 / eps);
  int d = 2;
  while (static_cast<double>(d) * d * std::log(static_cast<double>(d)) < target) {
    ++d;
    if (d > 1'000'000) throw NumericError("optimal_embed_dim: no solution in range");
  }
  return d;
}

}  // namespace filab
