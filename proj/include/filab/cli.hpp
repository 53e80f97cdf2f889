#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "filab/divergences.hpp"
#include "filab/experiments.hpp"
#include "filab/instance.hpp"
#include "filab/oracle.hpp"
#include "filab/samplers.hpp"
#include "filab/version.hpp"

namespace filab {

namespace detail {

inline nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed config JSON in " + path + ": " + e.what());
  }
  if (!j.contains("schema_version")) {
    throw SchemaError("config missing field", "schema_version");
  }
  if (j["schema_version"].get<int>() != 1) {
    throw SchemaError("unsupported config schema_version", "schema_version");
  }
  return j;
}

inline int run_solve_instance(int d, double eps, std::optional<double> radius, double c_pi,
                              const std::string& out) {
  BumpInstance inst = radius ? make_instance_given_R(d, *radius) : make_instance(d, eps, c_pi);
  const auto warnings = validate_instance(inst);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  save_instance(inst, out);
  const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
  std::cout << "d=" << inst.d << " r=" << sig10(inst.r) << " R=" << sig10(inst.R)
            << " M=" << inst.packing_count()
            << " residual=" << sig10(rr_residual(inst.d, inst.r, inst.R))
            << " Z_omega/Z_init=" << sig10(ri.Z_omega / ri.Z_init) << "\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

inline int run_audit_instance(const std::string& in, int pairs, std::uint64_t seed) {
  const LoadedInstance loaded = load_instance(in);
  const BumpInstance& inst = loaded.instance;
  bool ok = loaded.warnings.empty();
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";

  const double residual = rr_residual(inst.d, inst.r, inst.R);
  const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
  const double mass = std::pow(inst.r, inst.d) * ri.I_r / ri.Z_omega;
  std::cout << "residual " << sig10(residual) << (residual <= 1e-6 ? " ok" : " FAIL") << "\n";
  std::cout << "bump mass " << sig10(mass) << (std::abs(mass - 0.5) <= 1e-3 ? " ok" : " FAIL")
            << "\n";
  std::cout << "Z_omega <= 2 Z_init: "
            << (ri.Z_omega <= 2.0 * ri.Z_init ? "ok" : "FAIL") << "\n";
  if (residual > 1e-6 || std::abs(mass - 0.5) > 1e-3 || ri.Z_omega > 2.0 * ri.Z_init) {
    ok = false;
  }

  Rng rng(seed);
  std::vector<std::pair<Vec, Vec>> audit_pairs;
  audit_pairs.reserve(static_cast<std::size_t>(pairs));
  for (int i = 0; i < pairs; ++i) {
    Vec a(static_cast<std::size_t>(inst.d)), b(static_cast<std::size_t>(inst.d));
    for (int k = 0; k < inst.d; ++k) {
      a[static_cast<std::size_t>(k)] = (2.0 * rng.uniform() - 1.0) * 2.0 * inst.R;
      b[static_cast<std::size_t>(k)] = (2.0 * rng.uniform() - 1.0) * 2.0 * inst.R;
    }
    audit_pairs.emplace_back(std::move(a), std::move(b));
  }
  const SmoothnessReport rep = smoothness_audit(instance_potential(inst), audit_pairs, 1.0);
  std::cout << "smoothness max ratio " << sig10(rep.max_ratio) << " violations "
            << rep.violations << (rep.violations == 0 ? " ok" : " FAIL") << "\n";
  if (rep.violations > 0) ok = false;
  std::cout << (ok ? "audit passed" : "audit FAILED") << "\n";
  return ok ? 0 : 1;
}

inline int run_sample_cmd(const std::string& in, const std::string& strategy, int n,
                          std::uint64_t seed, double h, std::uint64_t iters,
                          std::uint64_t max_iter, const std::string& out) {
  const BumpInstance inst = load_instance(in).instance;
  const SmoothPotential pot = instance_potential(inst);
  const InitOracle init = make_pi_init_oracle(inst);

  std::ofstream csv(out);
  if (!csv) throw ValidationError("cannot open " + out);
  csv << "trial,queries,accepted";
  for (int k = 0; k < inst.d; ++k) csv << ",x" << k;
  csv << "\n";
  for (int t = 0; t < n; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    CountingOracle oracle(pot);
    Vec x;
    bool accepted = true;
    if (strategy == "lmc") {
      x = lmc_chain(oracle, draw_init(init, rng), h, iters, rng);
    } else if (strategy == "averaged_lmc") {
      x = averaged_lmc_sample(oracle, init, h, iters, rng);
    } else if (strategy == "rejection_warm") {
      const Envelope env = warm_start_envelope(init, oracle);
      const RejectionResult rr = rejection_sample(oracle, env, max_iter, rng);
      x = rr.point;
      accepted = rr.accepted;
    } else if (strategy == "exact") {
      x = exact_target_sample(inst, rng);
    } else {
      throw ValidationError("unknown sample strategy " + strategy);
    }
    csv << t << ',' << oracle.count() << ',' << (accepted ? 1 : 0);
    for (double v : x) csv << ',' << sig10(v);
    csv << "\n";
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

inline int run_diagnose(const std::string& in, int grid_n, const std::string& prefix) {
  const BumpInstance inst = load_instance(in).instance;
  if (inst.d != 1) throw ValidationError("diagnose: exact law work is 1-D only");
  const double span = inst.R + 12.0;
  const GridDensity1D target =
      grid_from_potential(instance_potential(inst), -span, span, grid_n);
  const GridDensity1D null_measure =
      grid_from_potential(init_potential(1, inst.R), -span, span, grid_n);
  target.write_csv(prefix + "_target.csv");
  null_measure.write_csv(prefix + "_init.csv");

  const RadialIntegrals ri = compute_integrals(inst.d, inst.r, inst.R);
  const MuckenhouptResult mk = muckenhoupt_report(target);
  const double base_cpi = 4.0 * muckenhoupt_B(null_measure);
  nlohmann::json report;
  report["schema_version"] = 1;
  report["code_version"] = FILAB_VERSION;
  report["d"] = inst.d;
  report["r"] = inst.r;
  report["R"] = inst.R;
  report["packing_count"] = inst.packing_count();
  report["residual"] = rr_residual(inst.d, inst.r, inst.R);
  report["Z_omega"] = ri.Z_omega;
  report["Z_init"] = ri.Z_init;
  report["bump_mass"] = std::pow(inst.r, inst.d) * ri.I_r / ri.Z_omega;
  report["kl_init_to_target"] = divergence(null_measure, target, Divergence::KL);
  report["muckenhoupt_B"] = mk.B;
  report["cpi_proxy_4B"] = 4.0 * mk.B;
  report["kappa_4B_over_R2"] = 4.0 * mk.B / (inst.R * inst.R);
  report["holley_stroock_cpi_bound"] = 2.0 * holley_stroock_bound(base_cpi, inst.bump_height());
  std::ofstream out(prefix + "_report.json");
  if (!out) throw ValidationError("cannot open " + prefix + "_report.json");
  out << report.dump(2) << "\n";
  std::cout << "wrote " << prefix << "_target.csv, " << prefix << "_init.csv, " << prefix
            << "_report.json\n";
  return 0;
}

inline int run_game_cmd(const std::string& config_path, const std::string& out) {
  const nlohmann::json raw = read_config(config_path);
  const GameConfig cfg = raw.get<GameConfig>();
  const GameResult result = run_identification_game(cfg);
  write_game_csv(result, out);
  nlohmann::json extra;
  extra["success_rate"] = result.success_rate;
  extra["success_se"] = result.success_se;
  extra["mean_queries"] = result.mean_queries;
  extra["packing_count"] = result.instance.packing_count();
  if (cfg.strategy == "scan") {
    extra["scan_exact_success"] = scan_game_exact_success(result.instance, cfg.budget);
  }
  write_sidecar(out + ".sidecar.json", "game", nlohmann::json(cfg), cfg.seed,
                SolverConstants{cfg.c_pi}, extra);
  std::cout << "success " << sig10(result.success_rate) << " +- " << sig10(result.success_se)
            << "  mean_queries " << sig10(result.mean_queries) << "  M "
            << result.instance.packing_count() << "\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

inline int run_equivalence_cmd(const std::string& config_path, const std::string& out) {
  const nlohmann::json raw = read_config(config_path);
  const EquivalenceConfig cfg = raw.get<EquivalenceConfig>();
  const EquivalenceReport report = run_equivalence_demo(cfg);
  write_equivalence_csv(report, out);
  nlohmann::json extra;
  extra["beta"] = report.beta;
  extra["gd_queries"] = report.gd_queries;
  extra["gd_grad_norm"] = report.gd_grad_norm;
  extra["fi_direction1"] = report.fi_direction1;
  extra["fi_bound"] = report.fi_bound;
  extra["success_fraction"] = report.success_fraction;
  extra["mean_queries"] = report.mean_queries;
  write_sidecar(out + ".sidecar.json", "equivalence", nlohmann::json(cfg), cfg.seed,
                SolverConstants{}, extra);
  std::cout << "direction 1: FI " << sig10(report.fi_direction1) << " <= "
            << sig10(report.fi_bound) << " with " << report.gd_queries << " queries\n";
  std::cout << "direction 2: success " << sig10(report.success_fraction) << " mean queries "
            << sig10(report.mean_queries) << "\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

inline int run_scaling_cmd(const std::string& config_path, const std::string& prefix) {
  const nlohmann::json raw = read_config(config_path);
  const ScalingConfig cfg = raw.get<ScalingConfig>();
  const ScalingResult result = run_scaling_study(cfg);
  nlohmann::json extra;
  for (const ScalingGroup& group : result.groups) {
    const std::string path = result.groups.size() == 1
                                 ? prefix + ".csv"
                                 : prefix + "_" + group.label + ".csv";
    write_scaling_csv(group, path);
    extra[group.label] = {{"slope", group.fit.slope},
                          {"intercept", group.fit.intercept},
                          {"r2", group.fit.r2},
                          {"csv", path}};
    std::cout << group.label << ": slope " << sig10(group.fit.slope) << " intercept "
              << sig10(group.fit.intercept) << " R^2 " << sig10(group.fit.r2) << "\n";
  }
  write_sidecar(prefix + ".sidecar.json", "scaling", nlohmann::json(cfg), cfg.seed,
                SolverConstants{}, extra);
  return 0;
}

}  // namespace detail

inline int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"query-complexity laboratory for non-log-concave sampling"};
  app.set_version_flag("--version", FILAB_VERSION);
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve-instance", "solve (r, R) and build the packing");
  int solve_d = 1;
  double solve_eps = 1e-2, solve_cpi = 1.0;
  std::optional<double> solve_R;
  std::string solve_out = "instance.json";
  solve->add_option("--d", solve_d, "dimension");
  solve->add_option("--eps", solve_eps, "target accuracy");
  double solve_R_val = 0.0;
  auto* r_opt = solve->add_option("--R", solve_R_val, "explicit flat radius (overrides --eps)");
  solve->add_option("--c-pi", solve_cpi, "Poincare constant scale");
  solve->add_option("--out", solve_out, "output instance file")->required();

  auto* audit = app.add_subcommand("audit-instance", "re-check a stored instance");
  std::string audit_in;
  int audit_pairs = 10000;
  std::uint64_t audit_seed = 1;
  audit->add_option("--in", audit_in, "instance file")->required();
  audit->add_option("--pairs", audit_pairs, "smoothness audit pairs");
  audit->add_option("--seed", audit_seed, "audit RNG seed");

  auto* sample = app.add_subcommand("sample", "draw samples from a stored instance");
  std::string sample_in, sample_strategy = "averaged_lmc", sample_out = "samples.csv";
  int sample_n = 1000;
  std::uint64_t sample_seed = 1, sample_iters = 100, sample_max_iter = 1000;
  double sample_h = 0.05;
  sample->add_option("--in", sample_in, "instance file")->required();
  sample->add_option("--strategy", sample_strategy,
                     "lmc | averaged_lmc | rejection_warm | exact");
  sample->add_option("--n", sample_n, "number of samples");
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--step", sample_h, "step size");
  sample->add_option("--iters", sample_iters, "LMC iterations");
  sample->add_option("--max-iter", sample_max_iter, "rejection trial cap");
  sample->add_option("--out", sample_out, "output CSV");

  auto* diagnose = app.add_subcommand("diagnose", "densities and functional-inequality report");
  std::string diag_in, diag_prefix = "diagnose";
  int diag_grid = 8192;
  diagnose->add_option("--in", diag_in, "instance file")->required();
  diagnose->add_option("--grid-n", diag_grid, "grid points");
  diagnose->add_option("--out", diag_prefix, "output prefix");

  auto* game = app.add_subcommand("game", "identification game");
  std::string game_config, game_out = "game.csv";
  game->add_option("--config", game_config, "config JSON")->required();
  game->add_option("--out", game_out, "output CSV");

  auto* equivalence = app.add_subcommand("equivalence", "optimization <-> sampling demo");
  std::string eq_config, eq_out = "equivalence.csv";
  equivalence->add_option("--config", eq_config, "config JSON")->required();
  equivalence->add_option("--out", eq_out, "output CSV");

  auto* scaling = app.add_subcommand("scaling", "FI decay / rejection accuracy studies");
  std::string sc_config, sc_prefix = "scaling";
  scaling->add_option("--config", sc_config, "config JSON")->required();
  scaling->add_option("--out", sc_prefix, "output prefix");

  auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form bounds");
  bool b_fano = false;
  long b_M = 4, b_N = 0;
  bounds->add_flag("--fano", b_fano, "Fano identification bound");
  bounds->add_option("--M", b_M, "hypothesis count");
  bounds->add_option("--N", b_N, "query budget");
  bool b_packing = false, b_packing1d = false, b_embed = false, b_hs = false, b_fitv = false;
  int b_d = 1;
  double b_eps = 1e-3, b_c = 1.0, b_cpi = 1.0, b_logratio = 0.0, b_fi = 0.0;
  bounds->add_flag("--packing", b_packing, "packing-number lower bound");
  bounds->add_flag("--packing-1d", b_packing1d, "sharpened 1-D packing bound");
  bounds->add_flag("--embed-dim", b_embed, "optimal embedding dimension");
  bounds->add_flag("--holley-stroock", b_hs, "perturbed Poincare bound");
  bounds->add_flag("--fi-tv", b_fitv, "TV bound from FI and C_PI");
  bounds->add_option("--d", b_d, "dimension");
  bounds->add_option("--eps", b_eps, "accuracy");
  bounds->add_option("--c", b_c, "bound constant");
  bounds->add_option("--cpi", b_cpi, "Poincare constant");
  bounds->add_option("--log-ratio", b_logratio, "sup log density ratio");
  bounds->add_option("--fi", b_fi, "Fisher information");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (solve->parsed()) {
      if (r_opt->count() > 0) solve_R = solve_R_val;
      return detail::run_solve_instance(solve_d, solve_eps, solve_R, solve_cpi, solve_out);
    }
    if (audit->parsed()) return detail::run_audit_instance(audit_in, audit_pairs, audit_seed);
    if (sample->parsed()) {
      return detail::run_sample_cmd(sample_in, sample_strategy, sample_n, sample_seed,
                                    sample_h, sample_iters, sample_max_iter, sample_out);
    }
    if (diagnose->parsed()) return detail::run_diagnose(diag_in, diag_grid, diag_prefix);
    if (game->parsed()) return detail::run_game_cmd(game_config, game_out);
    if (equivalence->parsed()) return detail::run_equivalence_cmd(eq_config, eq_out);
    if (scaling->parsed()) return detail::run_scaling_cmd(sc_config, sc_prefix);
    if (bounds->parsed()) {
      if (b_fano) {
        std::cout << sig10(fano_bound(b_M, b_N)) << "\n";
      } else if (b_packing) {
        std::cout << sig10(packing_count_bound(b_d, b_eps, b_c)) << "\n";
      } else if (b_packing1d) {
        std::cout << sig10(packing_count_bound_1d_sharp(b_eps, b_c)) << "\n";
      } else if (b_embed) {
        std::cout << optimal_embed_dim(b_eps) << "\n";
      } else if (b_hs) {
        std::cout << sig10(holley_stroock_bound(b_cpi, b_logratio)) << "\n";
      } else if (b_fitv) {
        std::cout << sig10(fi_tv_bound(b_cpi, b_fi)) << "\n";
      } else {
        throw ValidationError("bounds: pick one of --fano --packing --packing-1d "
                              "--embed-dim --holley-stroock --fi-tv");
      }
      return 0;
    }
    throw ValidationError("no subcommand handled");
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExhausted& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace filab
