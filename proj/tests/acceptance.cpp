// Acceptance suite: runs every shipped guarantee end to end and prints one
// pass/fail line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "filab/bounds.hpp"
#include "filab/divergences.hpp"
#include "filab/experiments.hpp"
#include "filab/grid_density.hpp"
#include "filab/instance.hpp"
#include "filab/oracle.hpp"
#include "filab/quadrature.hpp"
#include "filab/samplers.hpp"

using namespace filab;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  template <typename T>
  Check& operator<<(const T& v) {
    detail << v;
    return *this;
  }

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [FAILED: " << what << "]";
    }
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double direct_bump_mass_1d(const BumpInstance& inst) {
  const SmoothPotential pot = instance_potential(inst);
  const double w = inst.omega()[0];
  std::vector<double> pts{-inst.R - 14.0, -inst.R, w - inst.r, w, w + inst.r, inst.R,
                          inst.R + 14.0};
  std::sort(pts.begin(), pts.end());
  const double z = integrate_split(
      [&](double x) { return std::exp(-pot.at(x).value); }, pts, {.rel_tol = 1e-12});
  const double bump = integrate_split(
      [&](double x) { return std::exp(-pot.at(x).value); },
      {w - inst.r, w - inst.r * inst.profile.alpha(), w + inst.r * inst.profile.alpha(),
       w + inst.r},
      {.rel_tol = 1e-12});
  return bump / z;
}

// KL(pi_init || pi_omega) = log(Z_omega/Z_init) + E_init[V_omega - V_init]
double kl_init_to_target_1d(const BumpInstance& inst, const RadialIntegrals& ri) {
  const SmoothPotential pot = instance_potential(inst);
  const double w = inst.omega()[0];
  std::vector<double> pts{-inst.R - 14.0, -inst.R, w - inst.r, w, w + inst.r, inst.R,
                          inst.R + 14.0};
  std::sort(pts.begin(), pts.end());
  const double cross = integrate_split(
      [&](double x) {
        const double v = init_potential_eval(1, inst.R, Vec{x}).value;
        return std::exp(-v) * (pot.at(x).value - v);
      },
      pts, {.rel_tol = 1e-11});
  return std::log(ri.Z_omega / ri.Z_init) + cross / ri.Z_init;
}

GridDensity1D gaussian_grid(double mean, double var, double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  const double spacing = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = lo + spacing * i;
    v[static_cast<std::size_t>(i)] = std::exp(-0.5 * (x - mean) * (x - mean) / var);
  }
  return GridDensity1D(lo, hi, std::move(v));
}

// ---------------------------------------------------------------------------

void criterion_1(Check& c) {  // construction P1
  for (double eps : {1e-2, 1e-3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const BumpInstance inst = make_instance(1, eps);
    const double mass = direct_bump_mass_1d(inst);
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c << " eps=" << eps << ": mass=" << sig10(mass) << " (" << sig10(sec) << "s)";
    c.expect(std::abs(mass - 0.5) <= 1e-3, "bump mass outside 0.5 +- 1e-3");
    c.expect(sec < 1.0, "single-instance run exceeded 1 s");
  }
}

void criterion_2(Check& c) {  // construction P3
  const BumpInstance base = make_instance(1, 1e-2);
  const RadialIntegrals ri = compute_integrals(base.d, base.r, base.R);
  c << " M=" << base.packing_count();
  c.expect(ri.Z_omega <= 2.0 * ri.Z_init, "Z_omega exceeds 2 Z_init");
  double worst = 0.0;
  for (int w = 0; w < base.packing_count(); ++w) {
    BumpInstance inst = base;
    inst.omega_index = w;
    worst = std::max(worst, kl_init_to_target_1d(inst, ri));
  }
  c << " max KL=" << sig10(worst) << " (ln 2 = " << sig10(std::log(2.0)) << ")";
  c.expect(worst <= std::log(2.0) + 1e-6, "KL(pi_init || pi_omega) above log 2");
}

void criterion_3(Check& c) {  // I_r sandwich
  for (int d = 1; d <= 3; ++d) {
    for (double mult : {3.0, 5.0, 8.0}) {
      const double r = mult * std::sqrt(static_cast<double>(d));
      const double ratio = std::pow(r, d) * radial_bump_integral(d, r) /
                           (std::pow(2.0 * std::numbers::pi, 0.5 * d) *
                            std::exp(r * r * BumpProfile::kPhi0));
      c.expect(ratio >= 0.5 && ratio <= 2.0,
               "sandwich violated at d=" + std::to_string(d) + " r=" + sig10(r));
    }
  }
  c << " all ratios in [0.5, 2]";
}

void criterion_4(Check& c) {  // R-r solver
  const SolverConstants consts;
  double worst_res = 0.0, worst_ratio = 1e9;
  for (int d = 1; d <= 3; ++d) {
    for (double mult : {1.0, 2.0, 5.0}) {
      const double R = mult * consts.c_R * std::sqrt(static_cast<double>(d));
      const double r = solve_r_given_R(d, R);
      worst_res = std::max(worst_res, rr_residual(d, r, R));
      worst_ratio = std::min(worst_ratio, R / r);
    }
  }
  c << " max residual=" << sig10(worst_res) << " min R/r=" << sig10(worst_ratio);
  c.expect(worst_res <= 1e-8, "mass-balance residual above 1e-8");
  c.expect(worst_ratio >= 2.0, "R/r below 2");
}

void criterion_5(Check& c) {  // equivalence direction 1
  EquivalenceConfig cfg;
  cfg.eps = 0.1;
  cfg.trials = 1;  // direction 2 is criterion 6
  const EquivalenceReport rep = run_equivalence_demo(cfg);
  c << " grad=" << sig10(rep.gd_grad_norm) << " FI=" << sig10(rep.fi_direction1)
    << " bound=" << sig10(rep.fi_bound);
  c.expect(rep.gd_grad_norm <= cfg.eps, "gradient descent missed the eps target");
  c.expect(rep.fi_direction1 <= rep.fi_bound, "FI above 10 beta d");
}

void criterion_6(Check& c) {  // equivalence direction 2
  EquivalenceConfig cfg;
  cfg.eps = 0.1;
  cfg.trials = 1000;
  cfg.lmc_iters = 400;
  cfg.seed = 20240101;
  const EquivalenceReport rep = run_equivalence_demo(cfg);
  c << " success=" << sig10(rep.success_fraction) << " mean queries="
    << sig10(rep.mean_queries);
  c.expect(rep.success_fraction >= 0.45, "success fraction below 0.5 - 0.05");
}

void criterion_7(Check& c) {  // LMC law fidelity
  const double h = 0.1;
  const int steps = 150;
  const GridDensity1D mu0 = gaussian_grid(0.0, 1.0, -14.0, 14.0, 8192);
  LmcLawEvolver ev(quadratic_potential(1), mu0, h);
  for (int k = 0; k < steps; ++k) ev.step();
  const double var = ev.law().variance();
  const double expect = 2.0 / (2.0 - h);
  c << " var=" << sig10(var) << " vs " << sig10(expect);
  c.expect(std::abs(var - expect) <= 0.01 * expect, "stationary variance off by >1%");

  Rng rng(4711);
  CountingOracle oracle(quadratic_potential(1));
  const int n = 100000;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec x{rng.gaussian()};
    xs[static_cast<std::size_t>(i)] = lmc_chain(oracle, std::move(x), h, steps, rng)[0];
  }
  const double ks = ks_distance(xs, ev.law());
  c << " KS=" << sig10(ks);
  c.expect(ks < 0.01, "KS distance to the evolved law above 0.01");
}

void criterion_8(Check& c) {  // averaged-LMC FI decay
  ScalingConfig cfg;
  cfg.kind = "fi_decay";
  const ScalingResult res = run_scaling_study(cfg);
  const ScalingGroup& g = res.groups.front();
  c << " slope=" << sig10(g.fit.slope) << " FI(N=100)=" << sig10(g.rows.front().value)
    << " FI(N=10000)=" << sig10(g.rows.back().value);
  c.expect(g.fit.slope >= -0.75 && g.fit.slope <= -0.25, "log-log slope outside [-0.75, -0.25]");
}

void criterion_9(Check& c) {  // rejection sampling trial counts
  // doubled envelope over the standard Gaussian
  Envelope env;
  env.log_density = [](std::span<const double> x) {
    return std::log(2.0) - 0.5 * sqnorm(x);
  };
  env.sampler = [](Rng& rng) { return Vec{rng.gaussian()}; };
  env.ratio_bound = 2.0;
  Rng rng(6021);
  CountingOracle oracle(quadratic_potential(1));
  const int n = 100000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += static_cast<double>(rejection_sample(oracle, env, 1000, rng).trials);
  }
  const double mean = total / n;
  c << " mean trials=" << sig10(mean);
  c.expect(std::abs(mean - 2.0) <= 0.06, "mean trials outside 2.00 +- 0.06");

  for (double m0 : {0.5, 0.8, 1.0, 1.5, 2.0}) {
    const BumpInstance inst = single_bump_instance(1, m0);
    const InitOracle init = make_pi_init_oracle(inst);
    CountingOracle target(instance_potential(inst));
    const Envelope warm = warm_start_envelope(init, target);
    const double cap = std::exp(3.0 * *init.sup_log_ratio);
    Rng wrng(7001 + static_cast<std::uint64_t>(10 * m0));
    const int runs = 10000;
    double trials = 0.0;
    for (int i = 0; i < runs; ++i) {
      trials += static_cast<double>(
          rejection_sample(target, warm, 1u << 20, wrng).trials);
    }
    const double warm_mean = trials / runs;
    c.expect(warm_mean <= cap,
             "warm-start mean trials above exp(3 M0) at m0=" + sig10(m0));
  }
  c << " warm-start caps hold on 5 targets";
}

void criterion_10(Check& c) {  // rejection accuracy scaling
  ScalingConfig cfg;
  cfg.kind = "rejection_accuracy";
  const ScalingResult res = run_scaling_study(cfg);
  for (const ScalingGroup& g : res.groups) {
    c << " " << g.label << ": R2=" << sig10(g.fit.r2) << " slope=" << sig10(g.fit.slope);
    c.expect(g.fit.r2 >= 0.95, "linear fit R^2 below 0.95 for " + g.label);
  }
}

void criterion_11(Check& c) {  // identification game
  // exact scan enumeration at M = 10
  BumpInstance ten;
  ten.d = 1;
  ten.r = 1.0;
  ten.R = 12.0;
  ten.centers = explicit_packing_1d(10, 1.0, 12.0);
  ten.omega_index = 0;
  for (std::uint64_t N = 0; N <= 9; ++N) {
    const double exact = scan_game_exact_success(ten, N);
    c.expect(std::abs(exact - (static_cast<double>(N) + 1.0) / 10.0) <= 1e-12,
             "scan enumeration differs from (N+1)/M at N=" + std::to_string(N));
  }
  c << " scan enumeration = (N+1)/10 for N=0..9;";

  // fano arithmetic
  c.expect(fano_bound(4, 0) == 0.5, "fano_bound(4,0) != 0.5");

  // a sampler with measured TV <= 1/3 identifies the bump at rate >= 1/6 - 0.04
  const BumpInstance inst = make_instance(1, 1e-2);
  const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
  const double span = inst.R + 12.0;
  const GridDensity1D pi = grid_from_potential(instance_potential(inst), -span, span, 8192);
  const GridDensity1D mu0 = grid_from_potential(init_potential(1, inst.R), -span, span, 8192);
  const double tv0 = divergence(mu0, pi, Divergence::TV);
  const InitOracle init = make_pi_init_oracle(inst);
  const double mean_trials =
      std::exp(2.0 * *init.sup_log_ratio + inst.bump_height()) * ri.Z_init / ri.Z_omega;
  const double accept = 1.0 / mean_trials;
  const double p_target = std::min(0.85, 0.3 / tv0);
  const auto max_iter =
      static_cast<std::uint64_t>(std::ceil(std::log(p_target) / std::log1p(-accept)));
  const double p = std::pow(1.0 - accept, static_cast<double>(max_iter));
  const double mixture_tv = p * tv0;  // TV((1-p) pi + p mu0, pi) = p TV(mu0, pi)
  c << " M=" << inst.packing_count() << " mixture TV=" << sig10(mixture_tv);
  c.expect(mixture_tv <= 1.0 / 3.0, "rejection output law TV above 1/3");

  GameConfig game;
  game.d = 1;
  game.r = inst.r;
  game.R = inst.R;
  game.strategy = "rejection_warm";
  game.budget = max_iter + 1;
  game.trials = 1000;
  game.seed = 90210;
  const GameResult res = run_identification_game(game);
  c << " success=" << sig10(res.success_rate);
  c.expect(res.success_rate >= 1.0 / 6.0 - 0.04, "game success below 1/6 - 0.04");

  // demonstrative: averaged LMC under a Fano-level budget on a large packing
  const BumpInstance big = make_instance(1, 1e-3);
  if (big.packing_count() >= 48) {
    GameConfig fano_game;
    fano_game.d = 1;
    fano_game.r = big.r;
    fano_game.R = big.R;
    fano_game.strategy = "averaged_lmc";
    fano_game.budget = static_cast<std::uint64_t>(big.packing_count() / 12);
    fano_game.h = 0.05;
    fano_game.trials = 1000;
    fano_game.seed = 777;
    const GameResult fr = run_identification_game(fano_game);
    const double fano_cap =
        1.0 - fano_bound(big.packing_count(), static_cast<long>(fano_game.budget));
    c << " fano demo: M=" << big.packing_count() << " N=" << fano_game.budget
      << " success=" << sig10(fr.success_rate) << " <= cap " << sig10(fano_cap);
    c.expect(fr.success_rate <= fano_cap + 3.0 * fr.success_se,
             "averaged LMC beat the Fano ceiling (impossible)");
  } else {
    c.expect(false, "packing too small for the Fano demo");
  }
}

void criterion_12(Check& c) {  // Poincare diagnostics
  const double b_normal = muckenhoupt_B(gaussian_grid(0.0, 1.0, -16.0, 16.0, 8192));
  c << " B(N(0,1))=" << sig10(b_normal);
  c.expect(b_normal >= 0.25 && b_normal <= 1.0, "Gaussian Muckenhoupt B outside [1/4, 1]");

  std::vector<double> flat(4001, 1.0);
  const double b_uniform = muckenhoupt_B(GridDensity1D(0.0, 1.0, std::move(flat)));
  const double cpi_interval = 1.0 / (std::numbers::pi * std::numbers::pi);
  c << " B(U[0,1])=" << sig10(b_uniform);
  c.expect(b_uniform >= cpi_interval / 4.0 && b_uniform <= 4.0 * cpi_interval,
           "uniform Muckenhoupt B not within factor 4 of 1/pi^2");

  double kappa_min = 1e9, kappa_max = 0.0;
  for (double R : {10.0, 30.0, 100.0}) {
    const BumpInstance inst = make_instance_given_R(1, R);
    const double span = inst.R + 12.0;
    const GridDensity1D pi =
        grid_from_potential(instance_potential(inst), -span, span, 16385);
    const double kappa = 4.0 * muckenhoupt_B(pi) / (R * R);
    c << " kappa(R=" << R << ")=" << sig10(kappa);
    kappa_min = std::min(kappa_min, kappa);
    kappa_max = std::max(kappa_max, kappa);
  }
  // stable within +-50% of the mid value, i.e. max/min <= 3
  c.expect(kappa_max <= 3.0 * kappa_min, "kappa = 4B/R^2 varies by more than +-50%");
}

void criterion_13(Check& c) {  // FI -> TV
  int checked = 0;
  // Gaussian base with 12 perturbations
  {
    const GridDensity1D pi = gaussian_grid(0.0, 1.0, -16.0, 16.0, 8192);
    const double cpi = 4.0 * muckenhoupt_B(pi);
    for (int k = 0; k < 12; ++k) {
      const GridDensity1D mu =
          gaussian_grid(-0.44 + 0.08 * k, 1.0 + 0.03 * (k - 6), -16.0, 16.0, 8192);
      const double tv = divergence(mu, pi, Divergence::TV);
      const double bound = fi_tv_bound(cpi, fisher_information(mu, pi));
      c.expect(tv <= bound + 1e-10, "TV above sqrt(C_PI FI / 4) on a Gaussian pair");
      ++checked;
    }
  }
  // bump-instance base with heat-flow perturbations of the null measure
  {
    const BumpInstance inst = make_instance_given_R(1, 8.0);
    const double span = inst.R + 12.0;
    const GridDensity1D pi =
        grid_from_potential(instance_potential(inst), -span, span, 8192);
    const GridDensity1D mu0 = grid_from_potential(init_potential(1, inst.R), -span, span, 8192);
    const double cpi = 4.0 * muckenhoupt_B(pi);
    for (int k = 0; k < 8; ++k) {
      const double w = k / 7.0;
      std::vector<double> mix(static_cast<std::size_t>(pi.n()));
      for (int i = 0; i < pi.n(); ++i) {
        mix[static_cast<std::size_t>(i)] =
            (1.0 - 0.5 * w) * pi.values()[static_cast<std::size_t>(i)] +
            0.5 * w * mu0.values()[static_cast<std::size_t>(i)];
      }
      const GridDensity1D mu = convolve_gaussian(GridDensity1D(pi.lo(), pi.hi(), mix), 0.02);
      const double tv = divergence(mu, pi, Divergence::TV);
      const double bound = fi_tv_bound(cpi, fisher_information(mu, pi));
      c.expect(tv <= bound + 1e-10, "TV above sqrt(C_PI FI / 4) on a bump pair");
      ++checked;
    }
  }
  c << " " << checked << " pairs within the bound";
}

void criterion_14(Check& c) {  // score perturbation
  const GridDensity1D normal = gaussian_grid(0.0, 1.0, -16.0, 16.0, 8192);
  const BumpInstance inst = make_instance_given_R(1, 8.0);
  const GridDensity1D bump =
      grid_from_potential(instance_potential(inst), -(inst.R + 12.0), inst.R + 12.0, 8192);
  for (double t : {0.01, 0.05, 0.1}) {
    const double vg = score_perturbation_check(normal, t, 1.0);
    const double vb = score_perturbation_check(bump, t, 1.0);
    c << " t=" << t << ": gauss=" << sig10(vg) << " bump=" << sig10(vb);
    c.expect(vg <= 0.0, "Gaussian score perturbation bound violated");
    c.expect(vb <= 0.0, "bump score perturbation bound violated");
  }
}

void criterion_15(Check& c) {  // byte-identical reruns
  namespace fs = std::filesystem;
  const std::string dir = "acceptance_determinism";
  fs::create_directories(dir);
  int compared = 0;

  const auto compare_bytes = [&](const std::string& a, const std::string& b,
                                 const std::string& what) {
    c.expect(!slurp(a).empty() && slurp(a) == slurp(b), what + " not byte-identical");
    ++compared;
  };

  {
    GameConfig cfg;
    cfg.d = 1;
    cfg.r = 1.0;
    cfg.R = 12.0;
    cfg.M = 10;
    cfg.strategy = "scan";
    cfg.budget = 4;
    cfg.trials = 300;
    cfg.seed = 123;
    write_game_csv(run_identification_game(cfg), dir + "/game1.csv");
    write_game_csv(run_identification_game(cfg), dir + "/game2.csv");
    compare_bytes(dir + "/game1.csv", dir + "/game2.csv", "scan game CSV");
  }
  {
    GameConfig cfg;
    cfg.d = 1;
    cfg.eps = 1e-2;
    cfg.strategy = "rejection_warm";
    cfg.budget = 4000;
    cfg.trials = 50;
    cfg.seed = 5;
    write_game_csv(run_identification_game(cfg), dir + "/rej1.csv");
    write_game_csv(run_identification_game(cfg), dir + "/rej2.csv");
    compare_bytes(dir + "/rej1.csv", dir + "/rej2.csv", "rejection game CSV");
  }
  {
    EquivalenceConfig cfg;
    cfg.trials = 100;
    cfg.seed = 9;
    write_equivalence_csv(run_equivalence_demo(cfg), dir + "/eq1.csv");
    write_equivalence_csv(run_equivalence_demo(cfg), dir + "/eq2.csv");
    compare_bytes(dir + "/eq1.csv", dir + "/eq2.csv", "equivalence CSV");
  }
  {
    ScalingConfig cfg;
    cfg.kind = "fi_decay";
    cfg.iteration_counts = {50, 200};
    cfg.grid_n = 2049;
    write_scaling_csv(run_scaling_study(cfg).groups.front(), dir + "/fi1.csv");
    write_scaling_csv(run_scaling_study(cfg).groups.front(), dir + "/fi2.csv");
    compare_bytes(dir + "/fi1.csv", dir + "/fi2.csv", "fi_decay CSV");
  }
  {
    ScalingConfig cfg;
    cfg.kind = "rejection_accuracy";
    cfg.m0_values = {0.5};
    cfg.eps_values = {0.06, 0.03};
    write_scaling_csv(run_scaling_study(cfg).groups.front(), dir + "/ra1.csv");
    write_scaling_csv(run_scaling_study(cfg).groups.front(), dir + "/ra2.csv");
    compare_bytes(dir + "/ra1.csv", dir + "/ra2.csv", "rejection accuracy CSV");
  }
  fs::remove_all(dir);
  c << " " << compared << " rerun pairs byte-identical";
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = unbounded
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria{
      {1, "construction P1: bump carries half the mass", 2.0, criterion_1},
      {2, "construction P3: initialization KL at most log 2", 5.0, criterion_2},
      {3, "I_r sandwich across d <= 3", 1.0, criterion_3},
      {4, "mass-balance solver residual and R/r >= 2", 1.0, criterion_4},
      {5, "equivalence direction 1: FI of the stationary Gaussian", 1.0, criterion_5},
      {6, "equivalence direction 2: averaged LMC finds near-stationary points", 120.0,
       criterion_6},
      {7, "LMC law fidelity on the quadratic potential", 60.0, criterion_7},
      {8, "averaged-LMC Fisher information decay", 600.0, criterion_8},
      {9, "rejection sampling trial counts", 60.0, criterion_9},
      {10, "rejection accuracy scales linearly in log(1/eps)", 300.0, criterion_10},
      {11, "identification game", 300.0, criterion_11},
      {12, "Poincare diagnostics via Muckenhoupt", 60.0, criterion_12},
      {13, "Fisher information controls total variation", 60.0, criterion_13},
      {14, "score perturbation under heat flow", 60.0, criterion_14},
      {15, "determinism: reruns are byte-identical", 0.0, criterion_15},
  };

  int only = 0;
  if (argc > 1 && std::strcmp(argv[1], "--criterion") == 0 && argc > 2) {
    only = std::atoi(argv[2]);
  }

  int failures = 0;
  for (const Criterion& cr : criteria) {
    if (only != 0 && cr.id != only) continue;
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check << " [exception: " << e.what() << "]";
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.time_limit > 0.0 && sec > cr.time_limit) {
      check.ok = false;
      check << " [FAILED: exceeded " << cr.time_limit << " s]";
    }
    if (!check.ok) ++failures;
    std::printf("criterion %2d: %s - %s (%.1f s)%s\n", cr.id,
                check.ok ? "PASS" : "FAIL", cr.name, sec, check.detail.str().c_str());
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
