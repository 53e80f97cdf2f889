#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "filab/bump_profile.hpp"
#include "filab/errors.hpp"
#include "filab/potential.hpp"
#include "filab/quadrature.hpp"
#include "filab/special.hpp"
#include "filab/vec.hpp"

namespace filab {

// Constants the statements leave universal. c_R is calibrated as the smallest
// R/sqrt(d) for which the solved pair has R/r >= 2 across d <= 3 (measured
// thresholds R = 4.53, 9.04, 11.94 for d = 1, 2, 3; see tests); c_pi scales
// the Poincare constant in the R(eps) rule.
struct SolverConstants {
  double c_pi = 1.0;
  double c_R = 7.0;
};

// Smallest radius at which the solved pair keeps R/r >= 2, per dimension for
// d <= 3 (calibrated, slightly rounded up) and c_R sqrt(d) beyond.
inline double min_valid_R(int d, const SolverConstants& consts = {}) {
  switch (d) {
    case 1: return 4.6;
    case 2: return 9.1;
    case 3: return 12.0;
    default: return consts.c_R * std::sqrt(static_cast<double>(d));
  }
}

// I_r = integral over B_1 of exp(r^2 phi(|x|)), reduced to the radial line.
// Computed in factored form exp(r^2 phi(0)) * integral of the ratio, so the
// integrand never overflows even when the result is astronomically large.
inline double radial_bump_integral(int d, double r, double tol = 1e-11) {
  if (!(r >= 0.0)) throw ValidationError("radial_bump_integral: r must be >= 0");
  if (!(tol > 0.0)) throw ValidationError("radial_bump_integral: tol must be positive");
  if (d < 1) throw ValidationError("radial_bump_integral: d must be >= 1");
  const BumpProfile profile;
  const double phi0 = profile.phi0();
  const double r2 = r * r;
  const auto integrand = [&](double s) {
    return std::pow(s, d - 1) * std::exp(r2 * (profile.eval(s).phi - phi0));
  };
  const double core =
      integrate_split(integrand, {0.0, profile.alpha(), 1.0}, {.rel_tol = tol});
  return unit_sphere_area(d) * std::exp(r2 * phi0) * core;
}

// Mass of the unnormalized density outside B_R:
// A_{d-1} * integral over s >= 0 of (s+R)^{d-1} exp(-s^2/2),
// truncated at 12 standard deviations of the Gaussian factor.
inline double tail_mass(int d, double R, double tol = 1e-11) {
  if (!(R >= 0.0)) throw ValidationError("tail_mass: R must be >= 0");
  if (d < 1) throw ValidationError("tail_mass: d must be >= 1");
  const auto integrand = [&](double s) {
    return std::pow(s + R, d - 1) * std::exp(-0.5 * s * s);
  };
  return unit_sphere_area(d) *
         integrate_split(integrand, {0.0, 1.0, 3.0, 12.0}, {.rel_tol = tol});
}

struct RadialIntegrals {
  double I_r = 0.0;
  double V_d = 0.0;
  double A_dm1 = 0.0;
  double tail = 0.0;
  double Z_omega = 0.0;
  double Z_init = 0.0;
};

inline RadialIntegrals compute_integrals(int d, double r, double R, double tol = 1e-11) {
  RadialIntegrals out;
  out.V_d = unit_ball_volume(d);
  out.A_dm1 = unit_sphere_area(d);
  out.I_r = radial_bump_integral(d, r, tol);
  out.tail = tail_mass(d, R, tol);
  out.Z_init = out.tail + out.V_d * std::pow(R, d);
  out.Z_omega =
      out.tail + (std::pow(R, d) - std::pow(r, d)) * out.V_d + std::pow(r, d) * out.I_r;
  return out;
}

// f(r) = (I_r + V_d) r^d: the bump-side of the mass-balance equation.
inline double mass_balance_f(int d, double r, double tol = 1e-11) {
  return (radial_bump_integral(d, r, tol) + unit_ball_volume(d)) * std::pow(r, d);
}

// g(R) = tail(R) + V_d R^d = Z_init: the flat-side of the mass-balance equation.
inline double mass_balance_g(int d, double R, double tol = 1e-11) {
  return tail_mass(d, R, tol) + unit_ball_volume(d) * std::pow(R, d);
}

inline double rr_residual(int d, double r, double R, double tol = 1e-11) {
  const double g = mass_balance_g(d, R, tol);
  return std::abs(mass_balance_f(d, r, tol) - g) / g;
}

// Solves f(r) = g(R) for r by bisection. f is continuous, strictly increasing,
// f(0) = 0 < g(R), so the root exists; the initial bracket [0, R] is widened
// if f(R) < g(R) (possible for small R, in which case the root has r > R and
// no valid instance exists at that radius).
inline double solve_r_given_R(int d, double R, double rel_tol = 1e-12,
                              double quad_tol = 1e-11) {
  if (!(R > 0.0)) throw ValidationError("solve_r_given_R: R must be positive");
  const double target = mass_balance_g(d, R, quad_tol);
  double lo = 0.0;
  double hi = R;
  int widen = 0;
  while (mass_balance_f(d, hi, quad_tol) < target) {
    hi *= 2.0;
    if (++widen > 60) {
      throw BracketError("solve_r_given_R: could not bracket the root");
    }
  }
  while ((hi - lo) > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mass_balance_f(d, mid, quad_tol) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct SolvedRadii {
  double R = 0.0;
  double r = 0.0;
};

// Chooses (R, r) for a target accuracy eps.
//   d = 1:  R^2 = 1 / (9 c_pi eps^2)                       (improved 1-D route)
//   d >= 2: R^2 exp(r(R)^2 phi(0)) = 2d / (9 c_pi eps^2)   (outer bisection)
// Signals "epsilon too large" when the solved R would fall below c_R sqrt(d).
inline SolvedRadii solve_R_given_eps(int d, double eps, double c_pi = 1.0,
                                     const SolverConstants& consts = {}) {
  if (!(eps > 0.0)) throw ValidationError("solve_R_given_eps: eps must be positive");
  if (!(c_pi > 0.0)) throw ValidationError("solve_R_given_eps: c_pi must be positive");
  const double r_min = min_valid_R(d, consts);
  if (d == 1) {
    const double R = 1.0 / (3.0 * std::sqrt(c_pi) * eps);
    if (R < r_min) {
      throw ValidationError("solve_R_given_eps: epsilon too large for this dimension");
    }
    return {R, solve_r_given_R(d, R)};
  }
  const double phi0 = BumpProfile::kPhi0;
  const double target = 2.0 * d / (9.0 * c_pi * eps * eps);
  const auto lhs = [&](double R) {
    const double r = solve_r_given_R(d, R);
    return R * R * std::exp(r * r * phi0);
  };
  if (lhs(r_min) > target) {
    throw ValidationError("solve_R_given_eps: epsilon too large for this dimension");
  }
  double lo = r_min;
  double hi = 2.0 * r_min;
  int widen = 0;
  while (lhs(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++widen > 60) throw BracketError("solve_R_given_eps: could not bracket R");
  }
  while ((hi - lo) > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double R = 0.5 * (lo + hi);
  return {R, solve_r_given_R(d, R)};
}

// Maximal 2r-packing of B_{R-r}. In d = 1 this is the arithmetic grid of
// spacing 2r centered at 0; in d >= 2 a greedy pass over a candidate lattice
// of spacing r * spacing_factor, visited center-out for determinism. The
// achieved count is whatever comes out; callers record it rather than assume
// the volume bound.
inline std::vector<Vec> build_packing(int d, double r, double R,
                                      double spacing_factor = 0.25) {
  if (!(r > 0.0)) throw ValidationError("build_packing: r must be positive");
  if (R - r < 0.0) throw ValidationError("build_packing: degenerate geometry (R < r)");
  const double reach = R - r;
  if (d == 1) {
    const auto k_max = static_cast<long>(std::floor(reach / (2.0 * r)));
    std::vector<Vec> centers;
    centers.reserve(2 * k_max + 1);
    for (long k = -k_max; k <= k_max; ++k) centers.push_back({2.0 * r * k});
    return centers;
  }
  const double delta = r * spacing_factor;
  const auto half = static_cast<long>(std::floor(reach / delta));
  const double est = std::pow(2.0 * half + 1.0, d);
  if (est > 2e7) {
    throw ValidationError("build_packing: candidate lattice too large at this (r, R)");
  }
  std::vector<Vec> candidates;
  std::vector<long> idx(d, -half);
  for (;;) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = idx[i] * delta;
    if (norm(p) <= reach) candidates.push_back(std::move(p));
    int i = 0;
    while (i < d && ++idx[i] > half) idx[i++] = -half;
    if (i == d) break;
  }
  std::sort(candidates.begin(), candidates.end(), [](const Vec& a, const Vec& b) {
    const double na = sqnorm(a), nb = sqnorm(b);
    if (na != nb) return na < nb;
    return a < b;
  });
  std::vector<Vec> accepted;
  const double min_dist = 2.0 * r * (1.0 - 1e-12);
  for (const Vec& c : candidates) {
    bool ok = true;
    for (const Vec& a : accepted) {
      if (dist(c, a) < min_dist) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(c);
  }
  return accepted;
}

// Symmetric 1-D packing with an explicit count (even counts place centers at
// odd multiples of r). Used by game setups that pin M directly.
inline std::vector<Vec> explicit_packing_1d(int M, double r, double R) {
  if (M < 1) throw ValidationError("explicit_packing_1d: M must be >= 1");
  if (!(r > 0.0)) throw ValidationError("explicit_packing_1d: r must be positive");
  if ((M - 1) * r > R - r) {
    throw ValidationError("explicit_packing_1d: M centers do not fit in B_{R-r}");
  }
  std::vector<Vec> centers;
  centers.reserve(M);
  for (int i = 0; i < M; ++i) centers.push_back({(2.0 * i - (M - 1)) * r});
  return centers;
}

// A fully solved hard instance: dimension, radii, packing, selected center.
struct BumpInstance {
  int d = 1;
  double r = 0.0;
  double R = 0.0;
  std::vector<Vec> centers;
  int omega_index = 0;
  BumpProfile profile;

  const Vec& omega() const { return centers.at(static_cast<std::size_t>(omega_index)); }
  int packing_count() const { return static_cast<int>(centers.size()); }
  // sup log density ratio to the null measure, r^2 phi(0).
  double bump_height() const { return r * r * profile.phi0(); }
};

inline std::vector<std::string> validate_instance(const BumpInstance& inst,
                                                  double residual_tol = 1e-6) {
  std::vector<std::string> warnings;
  if (inst.d < 1) throw ValidationError("instance: d must be >= 1");
  if (!(inst.r > 0.0) || !(inst.R > 0.0)) {
    throw ValidationError("instance: radii must be positive");
  }
  if (inst.centers.empty()) throw ValidationError("instance: no centers");
  if (inst.omega_index < 0 || inst.omega_index >= inst.packing_count()) {
    throw ValidationError("instance: omega_index out of range");
  }
  const double reach = inst.R - inst.r;
  for (const Vec& c : inst.centers) {
    if (static_cast<int>(c.size()) != inst.d) {
      throw ValidationError("instance: center dimension mismatch");
    }
    if (norm(c) > reach * (1.0 + 1e-9) + 1e-12) {
      throw ValidationError("instance: center outside B_{R-r}");
    }
  }
  for (std::size_t i = 0; i < inst.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < inst.centers.size(); ++j) {
      if (dist(inst.centers[i], inst.centers[j]) < 2.0 * inst.r * (1.0 - 1e-9)) {
        throw ValidationError("instance: centers closer than 2r");
      }
    }
  }
  const double res = rr_residual(inst.d, inst.r, inst.R);
  if (res > residual_tol) {
    warnings.push_back("instance: mass-balance residual " + std::to_string(res) +
                       " exceeds " + std::to_string(residual_tol));
  }
  return warnings;
}

namespace detail {
inline int central_center_index(const std::vector<Vec>& centers) {
  int best = 0;
  double best_norm = norm(centers[0]);
  for (int i = 1; i < static_cast<int>(centers.size()); ++i) {
    const double n = norm(centers[static_cast<std::size_t>(i)]);
    if (n < best_norm - 1e-15) {
      best_norm = n;
      best = i;
    }
  }
  return best;
}
}  // namespace detail

inline BumpInstance make_instance(int d, double eps, double c_pi = 1.0,
                                  const SolverConstants& consts = {}) {
  const SolvedRadii radii = solve_R_given_eps(d, eps, c_pi, consts);
  BumpInstance inst;
  inst.d = d;
  inst.r = radii.r;
  inst.R = radii.R;
  inst.centers = build_packing(d, radii.r, radii.R);
  inst.omega_index = detail::central_center_index(inst.centers);
  return inst;
}

inline BumpInstance make_instance_given_R(int d, double R) {
  BumpInstance inst;
  inst.d = d;
  inst.R = R;
  inst.r = solve_r_given_R(d, R);
  if (inst.r > R) throw ValidationError("make_instance_given_R: solved r exceeds R");
  inst.centers = build_packing(d, inst.r, inst.R);
  inst.omega_index = detail::central_center_index(inst.centers);
  return inst;
}

// Single bump at the origin with prescribed height M0 = r^2 phi(0); R solves
// the mass-balance equation for that r. The natural target family for
// warm-start experiments.
inline BumpInstance single_bump_instance(int d, double m0) {
  if (!(m0 > 0.0)) throw ValidationError("single_bump_instance: m0 must be positive");
  BumpInstance inst;
  inst.d = d;
  inst.r = std::sqrt(m0 / BumpProfile::kPhi0);
  const double target = mass_balance_f(d, inst.r);
  double lo = 0.0, hi = std::max(inst.r, 1.0);
  int widen = 0;
  while (mass_balance_g(d, hi) < target) {
    hi *= 2.0;
    if (++widen > 60) throw BracketError("single_bump_instance: could not bracket R");
  }
  while ((hi - lo) > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mass_balance_g(d, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  inst.R = 0.5 * (lo + hi);
  if (inst.R < inst.r) {
    throw ValidationError("single_bump_instance: m0 too small, bump does not fit (R < r)");
  }
  inst.centers = {Vec(static_cast<std::size_t>(d), 0.0)};
  inst.omega_index = 0;
  return inst;
}

// V_omega(x) = -r^2 phi(|x - omega| / r) + (|x| - R)_+^2 / 2, exactly as
// defined (no hidden additive constant). Inside the quadratic cap the bump
// term is evaluated in closed form, so the gradient is exact at x = omega.
inline PotentialValue potential_eval(const BumpInstance& inst, std::span<const double> x) {
  if (static_cast<int>(x.size()) != inst.d) {
    throw DimensionMismatch(static_cast<std::size_t>(inst.d), x.size());
  }
  PotentialValue pv;
  pv.grad.assign(x.size(), 0.0);
  const Vec& w = inst.omega();
  const double u = dist(x, w);
  const double s = u / inst.r;
  if (s <= inst.profile.alpha()) {
    pv.value = -inst.r * inst.r * inst.profile.phi0() + 0.5 * u * u;
    for (std::size_t i = 0; i < x.size(); ++i) pv.grad[i] = x[i] - w[i];
  } else if (s < 1.0) {
    const PhiValue p = inst.profile.eval(s);
    pv.value = -inst.r * inst.r * p.phi;
    const double coef = -inst.r * p.dphi / u;
    for (std::size_t i = 0; i < x.size(); ++i) pv.grad[i] = coef * (x[i] - w[i]);
  }
  const double xnorm = norm(x);
  if (xnorm > inst.R) {
    const double excess = xnorm - inst.R;
    pv.value += 0.5 * excess * excess;
    const double coef = excess / xnorm;
    for (std::size_t i = 0; i < x.size(); ++i) pv.grad[i] += coef * x[i];
  }
  return pv;
}

// Null potential (|x| - R)_+^2 / 2.
inline PotentialValue init_potential_eval(int d, double R, std::span<const double> x) {
  if (static_cast<int>(x.size()) != d) {
    throw DimensionMismatch(static_cast<std::size_t>(d), x.size());
  }
  PotentialValue pv;
  pv.grad.assign(x.size(), 0.0);
  const double xnorm = norm(x);
  if (xnorm > R) {
    const double excess = xnorm - R;
    pv.value = 0.5 * excess * excess;
    const double coef = excess / xnorm;
    for (std::size_t i = 0; i < x.size(); ++i) pv.grad[i] = coef * x[i];
  }
  return pv;
}

inline SmoothPotential instance_potential(const BumpInstance& inst) {
  return SmoothPotential(inst.d, 1.0, [inst](std::span<const double> x) {
    return potential_eval(inst, x);
  });
}

inline SmoothPotential init_potential(int d, double R) {
  return SmoothPotential(d, 1.0, [d, R](std::span<const double> x) {
    return init_potential_eval(d, R, x);
  });
}

inline void save_instance(const BumpInstance& inst, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["d"] = inst.d;
  j["r"] = inst.r;
  j["R"] = inst.R;
  j["centers"] = inst.centers;
  j["omega_index"] = inst.omega_index;
  j["phi"] = std::string(inst.profile.id());
  std::ofstream out(path);
  if (!out) throw ValidationError("save_instance: cannot open " + path);
  out << j.dump(2) << "\n";
}

struct LoadedInstance {
  BumpInstance instance;
  std::vector<std::string> warnings;
};

inline LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_instance: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_instance: malformed JSON in " + path + ": " + e.what());
  }
  for (const char* key : {"schema_version", "d", "r", "R", "centers", "omega_index", "phi"}) {
    if (!j.contains(key)) throw SchemaError("load_instance: missing field", key);
  }
  if (j["schema_version"].get<int>() != 1) {
    throw SchemaError("load_instance: unsupported schema_version", "schema_version");
  }
  if (j["phi"].get<std::string>() != BumpProfile{}.id()) {
    throw SchemaError("load_instance: unknown bump profile id", "phi");
  }
  BumpInstance inst;
  inst.d = j["d"].get<int>();
  inst.r = j["r"].get<double>();
  inst.R = j["R"].get<double>();
  inst.centers = j["centers"].get<std::vector<Vec>>();
  inst.omega_index = j["omega_index"].get<int>();
  return {inst, validate_instance(inst)};
}

}  // namespace filab
