#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "filab/grid_density.hpp"
#include "filab/instance.hpp"
#include "filab/oracle.hpp"
#include "filab/quadrature.hpp"
#include "filab/rng.hpp"

using namespace filab;

TEST_CASE("counting oracle") {
  SECTION("each query increments the count by one") {
    CountingOracle oracle(quadratic_potential(1));
    (void)oracle.query(Vec{1.0});
    CHECK(oracle.count() == 1);
    for (int i = 0; i < 9; ++i) (void)oracle.query(Vec{0.5});
    CHECK(oracle.count() == 10);
  }
  SECTION("budget refusal leaves the count unchanged") {
    CountingOracle oracle(quadratic_potential(1), 5);
    for (int i = 0; i < 5; ++i) (void)oracle.query(Vec{0.0});
    CHECK_THROWS_AS(oracle.query(Vec{0.0}), BudgetExhausted);
    CHECK(oracle.count() == 5);
  }
  SECTION("additive constants shift values, never gradients") {
    const SmoothPotential base = cosine_well_potential();
    CountingOracle a(base);
    CountingOracle b(shift(base, 3.25));
    for (double x : {-2.0, 0.0, 0.7, 5.5}) {
      const PotentialValue pa = a.query(Vec{x});
      const PotentialValue pb = b.query(Vec{x});
      CHECK(pb.value - pa.value == Catch::Approx(3.25).margin(1e-14));
      CHECK(pb.grad[0] == pa.grad[0]);
    }
  }
  SECTION("budget report") {
    CountingOracle plain(quadratic_potential(1));
    (void)plain.query(Vec{0.0});
    const BudgetReport rep = plain.report();
    CHECK(rep.count == 1);
    CHECK(!rep.budget);
    CHECK(!rep.trace);

    CountingOracle traced(quadratic_potential(1), std::nullopt, true);
    (void)traced.query(Vec{1.0});
    (void)traced.query(Vec{2.0});
    (void)traced.query(Vec{3.0});
    const BudgetReport tr = traced.report();
    REQUIRE(tr.trace);
    REQUIRE(tr.trace->size() == 3);
    CHECK((*tr.trace)[1][0] == 2.0);
  }
}

TEST_CASE("free initialization draws") {
  Rng rng(21);
  SECTION("gaussian init mean is near zero") {
    const InitOracle init = make_gaussian_init_oracle(3, 1.0, 0.0);
    const int n = 100000;
    Vec mean(3, 0.0);
    for (int i = 0; i < n; ++i) {
      const Vec x = draw_init(init, rng);
      for (int j = 0; j < 3; ++j) mean[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
    }
    for (double m : mean) CHECK(std::abs(m / n) <= 4.0 / std::sqrt(static_cast<double>(n)));
  }
  SECTION("pi_init ball fraction matches quadrature") {
    const int d = 2;
    const double R = 3.0;
    const PiInitSampler sampler(d, R);
    const double expect = sampler.ball_probability();
    const int n = 100000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
      if (norm(sampler(rng)) <= R) ++inside;
    }
    const double frac = static_cast<double>(inside) / n;
    const double se = std::sqrt(expect * (1.0 - expect) / n);
    CHECK(std::abs(frac - expect) <= 3.0 * se);
  }
  SECTION("draws never touch a query counter") {
    const BumpInstance inst = make_instance_given_R(1, 6.0);
    CountingOracle oracle(instance_potential(inst));
    const InitOracle init = make_pi_init_oracle(inst);
    for (int i = 0; i < 100000; ++i) (void)draw_init(init, rng);
    CHECK(oracle.count() == 0);
  }
}

TEST_CASE("pi_init exact sampler") {
  Rng rng(31);
  SECTION("d=1 two-sided KS against the quadrature CDF") {
    const double R = 3.0;
    const PiInitSampler sampler(1, R);
    const int n = 100000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = sampler(rng)[0];
    const GridDensity1D law =
        grid_from_potential(init_potential(1, R), -R - 12.0, R + 12.0, 8192);
    // critical value at level 0.01
    CHECK(ks_distance(xs, law) < 1.628 / std::sqrt(static_cast<double>(n)));
  }
  SECTION("d=2 mean radius matches quadrature") {
    const int d = 2;
    const double R = 3.0;
    const PiInitSampler sampler(d, R);
    const double z = sampler.z_init();
    const double expect =
        unit_sphere_area(d) *
        integrate_split(
            [&](double s) {
              const double excess = std::max(0.0, s - R);
              return s * s * std::exp(-0.5 * excess * excess);
            },
            {0.0, R, R + 12.0}, {.rel_tol = 1e-11}) /
        z;
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = norm(sampler(rng));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - expect) <= 3.0 * se);
  }
  SECTION("tail acceptance weight never exceeds one") {
    const PiInitSampler sampler(3, 2.0);
    for (int i = 0; i < 100000; ++i) {
      const double s = 12.0 * rng.uniform();
      CHECK(sampler.tail_accept_weight(s) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("instance init oracle declares valid K0 and M0") {
  const BumpInstance inst = make_instance(1, 1e-2);
  const InitOracle init = make_pi_init_oracle(inst);
  REQUIRE(init.density);
  REQUIRE(init.sup_log_ratio);
  // numerically verify KL(mu0 || pi_omega) <= K0 and sup |log(mu0/pi)| <= M0
  const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
  const SmoothPotential pot = instance_potential(inst);
  // KL(pi_init || pi_omega) = log(Z_omega/Z_init)
  //                           + E_{pi_init}[V_omega - V_init]
  double kl = std::log(ri.Z_omega / ri.Z_init);
  kl += integrate_split(
            [&](double x) {
              const double v = init_potential_eval(1, inst.R, Vec{x}).value;
              return std::exp(-v) * (pot.at(x).value - v);
            },
            {-inst.R - 12.0, -inst.R, inst.omega()[0] - inst.r, inst.omega()[0] + inst.r,
             inst.R, inst.R + 12.0},
            {.rel_tol = 1e-11}) /
        ri.Z_init;
  CHECK(kl <= init.kl_bound + 1e-9);
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -inst.R - 6.0 + (2.0 * inst.R + 12.0) * i / 4000.0;
    // log(pi_omega / pi_init) = (V_init - V_omega) + log(Z_init / Z_omega)
    const double log_ratio = (init_potential_eval(1, inst.R, Vec{x}).value - pot.at(x).value) +
                             std::log(ri.Z_init / ri.Z_omega);
    worst = std::max(worst, std::abs(log_ratio));
  }
  CHECK(worst <= *init.sup_log_ratio + 1e-9);
}
