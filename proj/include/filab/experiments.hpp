#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "filab/bounds.hpp"
#include "filab/divergences.hpp"
#include "filab/errors.hpp"
#include "filab/grid_density.hpp"
#include "filab/instance.hpp"
#include "filab/oracle.hpp"
#include "filab/rng.hpp"
#include "filab/samplers.hpp"
#include "filab/version.hpp"

namespace filab {

// ---------------------------------------------------------------------------
// result-file plumbing: CSV rows with 10 significant digits, sidecar JSON
// with config hash / seed / constants / code version
// ---------------------------------------------------------------------------

inline std::string sig10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const nlohmann::json& config) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

inline void write_sidecar(const std::string& path, const std::string& kind,
                          const nlohmann::json& config, std::uint64_t seed,
                          const SolverConstants& constants,
                          const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = kind;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["seed"] = seed;
  j["constants"] = {{"c_pi", constants.c_pi}, {"c_R", constants.c_R}};
  j["code_version"] = FILAB_VERSION;
  if (!extra.empty()) j["results"] = extra;
  std::ofstream out(path);
  if (!out) throw ValidationError("write_sidecar: cannot open " + path);
  out << j.dump(2) << "\n";
}

inline void to_json(nlohmann::json& j, const BudgetReport& report) {
  j = nlohmann::json{{"count", report.count}};
  if (report.budget) j["budget"] = *report.budget;
  if (report.trace) j["trace"] = *report.trace;
}

// Per-trial outcome record. queries always equals the oracle's final count;
// wall_ms stays 0 unless timing was explicitly requested, so that result
// files are byte-identical across reruns with the same config and seed.
struct TrialRecord {
  int trial = 0;
  int omega_index = 0;
  std::uint64_t queries = 0;
  bool success = false;
  bool accepted = true;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
};

// ---------------------------------------------------------------------------
// identification game
// ---------------------------------------------------------------------------

struct GameConfig {
  int d = 1;
  double eps = 1e-2;
  std::optional<double> r;  // explicit instance radii override eps
  std::optional<double> R;
  std::optional<int> M;     // explicit 1-D packing count (requires r, R)
  std::string strategy = "scan";  // scan | averaged_lmc | rejection_warm
  std::uint64_t budget = 4;       // probes / LMC iterations / rejection trials+1
  double h = 0.05;                // averaged LMC step size
  int trials = 1000;
  std::uint64_t seed = 1;
  double c_pi = 1.0;
  bool timing = false;
};

struct GameResult {
  BumpInstance instance;
  std::vector<TrialRecord> records;
  double success_rate = 0.0;
  double success_se = 0.0;
  double mean_queries = 0.0;
};

inline BumpInstance game_instance(const GameConfig& cfg) {
  if (cfg.r && cfg.R) {
    BumpInstance inst;
    inst.d = cfg.d;
    inst.r = *cfg.r;
    inst.R = *cfg.R;
    if (cfg.M) {
      if (cfg.d != 1) throw ValidationError("explicit M requires d = 1");
      inst.centers = explicit_packing_1d(*cfg.M, inst.r, inst.R);
    } else {
      inst.centers = build_packing(cfg.d, inst.r, inst.R);
    }
    inst.omega_index = 0;
    return inst;
  }
  if (cfg.M) throw ValidationError("explicit M requires explicit r and R");
  return make_instance(cfg.d, cfg.eps, cfg.c_pi);
}

namespace detail {

inline int nearest_center(const BumpInstance& inst, std::span<const double> x) {
  int best = 0;
  double best_d = dist(x, inst.centers[0]);
  for (int i = 1; i < inst.packing_count(); ++i) {
    const double d = dist(x, inst.centers[static_cast<std::size_t>(i)]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Probe centers in index order; the bump announces itself through
// V(center) < -r^2 phi(0) / 2 (V is exactly 0 at every unoccupied center).
// If the budget runs out, guess uniformly among the unprobed centers.
inline Vec scan_strategy(const BumpInstance& inst, CountingOracle& oracle,
                         std::uint64_t budget, Rng& rng) {
  const int M = inst.packing_count();
  const double detect = -0.5 * inst.r * inst.r * BumpProfile::kPhi0;
  const int probes = static_cast<int>(std::min<std::uint64_t>(budget, M));
  for (int i = 0; i < probes; ++i) {
    if (oracle.query(inst.centers[static_cast<std::size_t>(i)]).value < detect) {
      return inst.centers[static_cast<std::size_t>(i)];
    }
  }
  if (probes >= M) return inst.centers.back();  // exhaustive scan cannot miss
  const int pick = probes + static_cast<int>(rng.uniform() * (M - probes));
  return inst.centers[static_cast<std::size_t>(std::min(pick, M - 1))];
}

}  // namespace detail

// Exhaustive enumeration of the scan strategy: average over all omega of the
// exact per-omega success probability (1 when probed, 1/(M - N) when the
// guess must pick among the unprobed centers). Runs the real probe loop
// against the real oracle for each omega.
inline double scan_game_exact_success(BumpInstance inst, std::uint64_t budget) {
  const int M = inst.packing_count();
  const double detect = -0.5 * inst.r * inst.r * BumpProfile::kPhi0;
  const int probes = static_cast<int>(std::min<std::uint64_t>(budget, M));
  double total = 0.0;
  for (int w = 0; w < M; ++w) {
    inst.omega_index = w;
    CountingOracle oracle(instance_potential(inst));
    bool found = false;
    for (int i = 0; i < probes; ++i) {
      if (oracle.query(inst.centers[static_cast<std::size_t>(i)]).value < detect) {
        // the probed center is the bump iff i == w; the estimator then
        // recovers omega exactly
        found = true;
        break;
      }
    }
    if (found) {
      total += 1.0;
    } else if (probes < M) {
      total += 1.0 / (M - probes);
    }
  }
  return total / M;
}

inline GameResult run_identification_game(const GameConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("game: trials must be >= 1");
  GameResult result;
  result.instance = game_instance(cfg);
  const int M = result.instance.packing_count();
  if (M < 1) throw ValidationError("game: empty packing");
  if (cfg.strategy == "rejection_warm" && cfg.budget < 2) {
    throw ValidationError("game: rejection_warm needs budget >= 2");
  }

  result.records.reserve(static_cast<std::size_t>(cfg.trials));
  double successes = 0.0;
  double queries = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    BumpInstance inst = result.instance;
    inst.omega_index = static_cast<int>(rng.uniform() * M);
    if (inst.omega_index >= M) inst.omega_index = M - 1;

    const auto t0 = std::chrono::steady_clock::now();
    CountingOracle oracle(instance_potential(inst), cfg.budget);
    Vec x;
    bool accepted = true;
    if (cfg.strategy == "scan") {
      x = detail::scan_strategy(inst, oracle, cfg.budget, rng);
    } else if (cfg.strategy == "averaged_lmc") {
      const InitOracle init = make_pi_init_oracle(inst);
      x = averaged_lmc_sample(oracle, init, cfg.h, cfg.budget, rng);
    } else if (cfg.strategy == "rejection_warm") {
      const InitOracle init = make_pi_init_oracle(inst);
      const Envelope env = warm_start_envelope(init, oracle);
      const RejectionResult rr = rejection_sample(oracle, env, cfg.budget - 1, rng);
      x = rr.point;
      accepted = rr.accepted;
    } else {
      throw ValidationError("game: unknown strategy " + cfg.strategy);
    }

    TrialRecord rec;
    rec.trial = t;
    rec.omega_index = inst.omega_index;
    rec.queries = oracle.count();
    rec.success = detail::nearest_center(inst, x) == inst.omega_index;
    rec.accepted = accepted;
    if (cfg.timing) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
    }
    successes += rec.success ? 1.0 : 0.0;
    queries += static_cast<double>(rec.queries);
    result.records.push_back(rec);
  }
  const double n = static_cast<double>(cfg.trials);
  result.success_rate = successes / n;
  result.success_se = std::sqrt(result.success_rate * (1.0 - result.success_rate) / n);
  result.mean_queries = queries / n;
  return result;
}

inline void write_game_csv(const GameResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_game_csv: cannot open " + path);
  out << "trial,omega_index,queries,success,wall_ms\n";
  for (const TrialRecord& r : result.records) {
    out << r.trial << ',' << r.omega_index << ',' << r.queries << ','
        << (r.success ? 1 : 0) << ',' << sig10(r.wall_ms) << "\n";
  }
}

// ---------------------------------------------------------------------------
// optimization <-> sampling equivalence demo
// ---------------------------------------------------------------------------

struct EquivalenceConfig {
  double eps = 0.1;
  int d = 1;
  double x0 = 2.0;          // gradient descent start
  std::uint64_t gd_cap = 2000;
  double h_factor = 0.5;    // step size h = h_factor / beta
  std::uint64_t lmc_iters = 400;
  int trials = 1000;
  std::uint64_t seed = 1;
  bool timing = false;
};

struct EquivalenceReport {
  double beta = 0.0;
  // direction 1: stationary point -> Fisher information
  double gd_grad_norm = 0.0;
  double gd_point = 0.0;
  std::uint64_t gd_queries = 0;
  double fi_direction1 = 0.0;
  double fi_bound = 0.0;  // 10 beta d
  // direction 2: averaged LMC sample -> near-stationary gradient
  double success_fraction = 0.0;
  double mean_queries = 0.0;
  std::vector<TrialRecord> records;
};

inline EquivalenceReport run_equivalence_demo(const EquivalenceConfig& cfg) {
  const SmoothPotential base = cosine_well_potential();
  const double beta = cfg.d / (cfg.eps * cfg.eps);
  EquivalenceReport report;
  report.beta = beta;
  report.fi_bound = 10.0 * beta * cfg.d;

  // direction 1: descend until the gradient is below eps, then measure the
  // Fisher information of N(x*, 1/beta) against pi_beta by quadrature
  {
    CountingOracle oracle(base);
    Vec x{cfg.x0};
    double grad_norm = std::numeric_limits<double>::infinity();
    for (std::uint64_t t = 0; t < cfg.gd_cap; ++t) {
      const PotentialValue pv = oracle.query(x);
      grad_norm = norm(pv.grad);
      if (grad_norm <= cfg.eps) break;
      axpy(-1.0, pv.grad, x);
    }
    report.gd_grad_norm = grad_norm;
    report.gd_point = x[0];
    report.gd_queries = oracle.count();

    const double lo = std::min(0.0, x[0]) - 3.0;
    const double hi = std::max(0.0, x[0]) + 3.0;
    const int n = 8192;
    const GridDensity1D pi_beta = grid_from_potential(tilt(base, beta), lo, hi, n);
    std::vector<double> gauss(static_cast<std::size_t>(n));
    const double spacing = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double u = lo + spacing * i - x[0];
      gauss[static_cast<std::size_t>(i)] = std::exp(-0.5 * beta * u * u);
    }
    const GridDensity1D mu_beta(lo, hi, std::move(gauss));
    report.fi_direction1 = fisher_information(mu_beta, pi_beta);
  }

  // direction 2: averaged LMC on pi_beta; report the fraction of runs whose
  // output is 3eps-stationary for V
  {
    const SmoothPotential tilted = tilt(base, beta);
    const InitOracle init = make_gaussian_init_oracle(cfg.d, 1.0 / beta, 0.0);
    const double h = cfg.h_factor / beta;
    double successes = 0.0, queries = 0.0;
    report.records.reserve(static_cast<std::size_t>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
      const auto t0 = std::chrono::steady_clock::now();
      CountingOracle oracle(tilted);
      const Vec x = averaged_lmc_sample(oracle, init, h, cfg.lmc_iters, rng);
      TrialRecord rec;
      rec.trial = t;
      rec.queries = oracle.count();
      rec.grad_norm = norm(base(x).grad);
      rec.success = rec.grad_norm <= 3.0 * cfg.eps;
      if (cfg.timing) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
      }
      successes += rec.success ? 1.0 : 0.0;
      queries += static_cast<double>(rec.queries);
      report.records.push_back(rec);
    }
    report.success_fraction = successes / cfg.trials;
    report.mean_queries = queries / cfg.trials;
  }
  return report;
}

inline void write_equivalence_csv(const EquivalenceReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_equivalence_csv: cannot open " + path);
  out << "trial,queries,grad_norm,success,wall_ms\n";
  for (const TrialRecord& r : report.records) {
    out << r.trial << ',' << r.queries << ',' << sig10(r.grad_norm) << ','
        << (r.success ? 1 : 0) << ',' << sig10(r.wall_ms) << "\n";
  }
}

// ---------------------------------------------------------------------------
// scaling studies
// ---------------------------------------------------------------------------

struct ScalingRow {
  double x = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
};

struct FitStats {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline FitStats least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) throw ValidationError("least_squares: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double nn = static_cast<double>(n);
  const double cov = sxy - sx * sy / nn;
  const double var_x = sxx - sx * sx / nn;
  const double var_y = syy - sy * sy / nn;
  FitStats fit;
  fit.slope = cov / var_x;
  fit.intercept = (sy - fit.slope * sx) / nn;
  fit.r2 = (var_y > 0.0) ? cov * cov / (var_x * var_y) : 1.0;
  return fit;
}

struct ScalingGroup {
  std::string label;
  std::vector<ScalingRow> rows;
  FitStats fit;  // fi_decay: log FI vs log N; rejection: queries vs log(1/eps)
};

struct ScalingResult {
  std::string kind;
  std::vector<ScalingGroup> groups;
};

struct ScalingConfig {
  std::string kind = "fi_decay";  // fi_decay | rejection_accuracy
  std::uint64_t seed = 1;         // recorded; these studies are quadrature-only
  // fi_decay
  double eps = 0.05;
  std::vector<int> iteration_counts{100, 316, 1000, 3162, 10000};
  int grid_n = 4097;
  int refinement = 1;
  double c_h = 1.0;  // h = c_h sqrt(K0 / N)
  double c_pi = 1.0;
  // rejection_accuracy
  std::vector<double> m0_values{0.5, 1.0, 2.0};
  std::vector<double> eps_values{0.06, 0.03, 0.015, 0.0075, 0.00375};
  double t_factor = 0.02;  // heat time t = t_factor * eps^2
  int accuracy_grid_n = 32769;
};

// Averaged-LMC Fisher information decay on a 1-D bump instance, with the
// step size optimized per N (h ~ sqrt(K0 / N) balances the two error terms).
inline ScalingResult run_fi_decay_study(const ScalingConfig& cfg) {
  const BumpInstance inst = make_instance(1, cfg.eps, cfg.c_pi);
  const SmoothPotential pot = instance_potential(inst);
  const double span = inst.R + 12.0;
  const GridDensity1D pi = grid_from_potential(pot, -span, span, cfg.grid_n);
  const GridDensity1D mu0 =
      grid_from_potential(init_potential(1, inst.R), -span, span, cfg.grid_n);
  const double k0 = divergence(mu0, pi, Divergence::KL);

  ScalingGroup group;
  group.label = "fi_decay";
  std::vector<double> log_n, log_fi;
  for (int N : cfg.iteration_counts) {
    const double h = cfg.c_h * std::sqrt(k0 / N);
    const GridDensity1D mixed = averaged_law_evolve(pot, mu0, h, N, cfg.refinement);
    const double fi = fisher_information(mixed, pi);
    group.rows.push_back({static_cast<double>(N), fi, 0.0});
    log_n.push_back(std::log(static_cast<double>(N)));
    log_fi.push_back(std::log(fi));
  }
  group.fit = least_squares(log_n, log_fi);
  return {"fi_decay", {group}};
}

// Queries needed by warm-start rejection (plus heat post-processing) to push
// the measured Fisher information below eps^2, as a function of log(1/eps)
// and of the warmness M0. All laws are exact mixtures tracked by quadrature.
inline ScalingResult run_rejection_accuracy_study(const ScalingConfig& cfg) {
  ScalingResult result;
  result.kind = "rejection_accuracy";
  for (const double m0 : cfg.m0_values) {
    const BumpInstance inst = single_bump_instance(1, m0);
    const SmoothPotential pot = instance_potential(inst);
    const double span = inst.R + 12.0;
    const InitOracle init = make_pi_init_oracle(inst);
    const double declared_m0 = *init.sup_log_ratio;
    const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
    // mean trials of warm-start rejection: exp(2 M0) pi(0) / mu0(0)
    const double mean_trials =
        std::exp(2.0 * declared_m0 + inst.bump_height()) * ri.Z_init / ri.Z_omega;
    const double accept = 1.0 / mean_trials;

    ScalingGroup group;
    group.label = "m0_" + sig10(m0);
    std::vector<double> xs, ys;
    for (const double eps : cfg.eps_values) {
      const double t = cfg.t_factor * eps * eps;
      // the grid must resolve the heat kernel: spacing <= sqrt(t) / 4
      int n_eps = cfg.accuracy_grid_n;
      const double needed = 8.0 * span / std::sqrt(t);
      if (needed > n_eps) n_eps = (static_cast<int>(needed) | 1);
      const GridDensity1D pi = grid_from_potential(pot, -span, span, n_eps);
      const GridDensity1D mu0 =
          grid_from_potential(init_potential(1, inst.R), -span, span, n_eps);
      const GridDensity1D pi_t = convolve_gaussian(pi, t);
      const GridDensity1D mu0_t = convolve_gaussian(mu0, t);
      const auto fi_at = [&](double p) {
        std::vector<double> mix(static_cast<std::size_t>(pi.n()));
        for (int i = 0; i < pi.n(); ++i) {
          mix[static_cast<std::size_t>(i)] =
              (1.0 - p) * pi_t.values()[static_cast<std::size_t>(i)] +
              p * mu0_t.values()[static_cast<std::size_t>(i)];
        }
        return fisher_information(GridDensity1D(pi.lo(), pi.hi(), std::move(mix)), pi);
      };
      const double target = eps * eps;
      if (fi_at(0.0) > 0.5 * target) {
        throw NumericError("rejection accuracy study: heat-flow floor too high at eps = " +
                           sig10(eps));
      }
      // smallest trial cap whose failure probability drags FI below eps^2
      std::uint64_t lo = 1, hi = 1;
      const auto fi_of_n = [&](std::uint64_t n_trials) {
        return fi_at(std::pow(1.0 - accept, static_cast<double>(n_trials)));
      };
      while (fi_of_n(hi) > target) {
        hi *= 2;
        if (hi > (1ULL << 40)) {
          throw NumericError("rejection accuracy study: no feasible trial count");
        }
      }
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (fi_of_n(mid) > target) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      const double queries = static_cast<double>(lo + 1);  // +1 normalization
      group.rows.push_back({std::log(1.0 / eps), queries, 0.0});
      xs.push_back(std::log(1.0 / eps));
      ys.push_back(queries);
    }
    group.fit = least_squares(xs, ys);
    result.groups.push_back(std::move(group));
  }
  return result;
}

inline ScalingResult run_scaling_study(const ScalingConfig& cfg) {
  if (cfg.kind == "fi_decay") return run_fi_decay_study(cfg);
  if (cfg.kind == "rejection_accuracy") return run_rejection_accuracy_study(cfg);
  throw ValidationError("run_scaling_study: unknown kind " + cfg.kind);
}

inline void write_scaling_csv(const ScalingGroup& group, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_scaling_csv: cannot open " + path);
  out << "x,value,stderr\n";
  for (const ScalingRow& r : group.rows) {
    out << sig10(r.x) << ',' << sig10(r.value) << ',' << sig10(r.stderr_) << "\n";
  }
}

// ---------------------------------------------------------------------------
// JSON bindings for the config types
// ---------------------------------------------------------------------------

inline void from_json(const nlohmann::json& j, GameConfig& cfg) {
  cfg.d = j.value("d", cfg.d);
  cfg.eps = j.value("eps", cfg.eps);
  if (j.contains("r")) cfg.r = j["r"].get<double>();
  if (j.contains("R")) cfg.R = j["R"].get<double>();
  if (j.contains("M")) cfg.M = j["M"].get<int>();
  cfg.strategy = j.value("strategy", cfg.strategy);
  cfg.budget = j.value("budget", cfg.budget);
  cfg.h = j.value("h", cfg.h);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.c_pi = j.value("c_pi", cfg.c_pi);
  cfg.timing = j.value("timing", cfg.timing);
}

inline void to_json(nlohmann::json& j, const GameConfig& cfg) {
  j = {{"d", cfg.d},          {"eps", cfg.eps},     {"strategy", cfg.strategy},
       {"budget", cfg.budget}, {"h", cfg.h},        {"trials", cfg.trials},
       {"seed", cfg.seed},    {"c_pi", cfg.c_pi},   {"timing", cfg.timing}};
  if (cfg.r) j["r"] = *cfg.r;
  if (cfg.R) j["R"] = *cfg.R;
  if (cfg.M) j["M"] = *cfg.M;
}

inline void from_json(const nlohmann::json& j, EquivalenceConfig& cfg) {
  cfg.eps = j.value("eps", cfg.eps);
  cfg.d = j.value("d", cfg.d);
  cfg.x0 = j.value("x0", cfg.x0);
  cfg.gd_cap = j.value("gd_cap", cfg.gd_cap);
  cfg.h_factor = j.value("h_factor", cfg.h_factor);
  cfg.lmc_iters = j.value("lmc_iters", cfg.lmc_iters);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.timing = j.value("timing", cfg.timing);
}

inline void to_json(nlohmann::json& j, const EquivalenceConfig& cfg) {
  j = {{"eps", cfg.eps},           {"d", cfg.d},
       {"x0", cfg.x0},             {"gd_cap", cfg.gd_cap},
       {"h_factor", cfg.h_factor}, {"lmc_iters", cfg.lmc_iters},
       {"trials", cfg.trials},     {"seed", cfg.seed},
       {"timing", cfg.timing}};
}

inline void from_json(const nlohmann::json& j, ScalingConfig& cfg) {
  cfg.kind = j.value("kind", cfg.kind);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.eps = j.value("eps", cfg.eps);
  if (j.contains("iteration_counts")) {
    cfg.iteration_counts = j["iteration_counts"].get<std::vector<int>>();
  }
  cfg.grid_n = j.value("grid_n", cfg.grid_n);
  cfg.refinement = j.value("refinement", cfg.refinement);
  cfg.c_h = j.value("c_h", cfg.c_h);
  cfg.c_pi = j.value("c_pi", cfg.c_pi);
  if (j.contains("m0_values")) cfg.m0_values = j["m0_values"].get<std::vector<double>>();
  if (j.contains("eps_values")) cfg.eps_values = j["eps_values"].get<std::vector<double>>();
  cfg.t_factor = j.value("t_factor", cfg.t_factor);
  cfg.accuracy_grid_n = j.value("accuracy_grid_n", cfg.accuracy_grid_n);
}

inline void to_json(nlohmann::json& j, const ScalingConfig& cfg) {
  j = {{"kind", cfg.kind},
       {"seed", cfg.seed},
       {"eps", cfg.eps},
       {"iteration_counts", cfg.iteration_counts},
       {"grid_n", cfg.grid_n},
       {"refinement", cfg.refinement},
       {"c_h", cfg.c_h},
       {"c_pi", cfg.c_pi},
       {"m0_values", cfg.m0_values},
       {"eps_values", cfg.eps_values},
       {"t_factor", cfg.t_factor},
       {"accuracy_grid_n", cfg.accuracy_grid_n}};
}

}  // namespace filab
