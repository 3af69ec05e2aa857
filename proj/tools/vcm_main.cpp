#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "vcm/config.hpp"
#include "vcm/rng.hpp"
#include "vcm/design.hpp"
#include "vcm/experiments.hpp"
#include "vcm/io.hpp"
#include "vcm/solver.hpp"
#include "vcm/synth.hpp"
#include "vcm/theory.hpp"

namespace fs = std::filesystem;
using namespace vcm;

namespace {

constexpr const char* kVersion = "vcm 1.0";

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;          // 0 = take from config
  std::uint64_t seed = 0;   // 0 = take from config
};

ExperimentPlan load_plan(const CommonFlags& flags) {
  if (flags.config_path.empty())
    throw std::invalid_argument("missing --config (experiment plan file)");
  ExperimentPlan plan = plan_from_config(parse_config_text(read_file(flags.config_path)));
  if (flags.threads > 0) plan.threads = flags.threads;
  if (flags.seed != 0) plan.master_seed = flags.seed;
  return plan;
}

void write_manifest(const fs::path& dir, const ExperimentPlan& plan) {
  std::string text = "# ";
  text += kVersion;
  text += '\n';
  text += manifest_text(plan);
  atomic_write_file(dir / "manifest.txt", text);
}

int cmd_experiment(const CommonFlags& flags) {
  const ExperimentPlan plan = load_plan(flags);
  const ExperimentResult result = run_plan(plan);
  const fs::path dir(flags.out_dir);
  atomic_write_file(dir / "results.csv", results_csv(result));
  atomic_write_file(dir / "aggregates.csv", aggregates_csv(result));
  write_manifest(dir, plan);
  std::printf("experiment '%s': %zu rows, %d flagged, slope %.4f (theory %.4f)\n",
              plan.name.c_str(), result.rows.size(), result.flagged, result.slope,
              result.theory_slope);
  return result.flagged > 0 ? 2 : 0;
}

int cmd_bounds(const CommonFlags& flags) {
  const ExperimentPlan plan = load_plan(flags);
  std::string csv =
      "n,L_plus_1,delta_hat,delta_lower,delta_upper,delta_highprob,n_low,N_upper,"
      "mu_feasible\n";
  for (long n : plan.n_grid) {
    const int L_plus_1 =
        plan.L_override >= 0
            ? plan.L_override + 1
            : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double log_p = std::log(static_cast<double>(plan.dictionary.p));
    const int aleph_s = plan.truth.s() + plan.truth.s0();
    const RicConstants ric =
        theoretical_ric(plan.dictionary, aleph_s, plan.penalty.mu, log_p);
    TheoryBounds b;
    b.s = plan.truth.s();
    b.s0 = plan.truth.s0();
    b.n = static_cast<double>(n);
    b.p = static_cast<double>(plan.dictionary.p);
    b.sigma = plan.sigma;
    b.c_a = plan.truth.c_a;
    b.smoothness = plan.truth.smoothness;
    b.kappa = plan.kappa;
    b.omega_min_s = ric.omega_min;
    b.omega_max_s = ric.omega_max;
    b.phi_min = 1.0 - std::abs(plan.time_tilt);
    b.phi_max = 1.0 + std::abs(plan.time_tilt);
    b.mu = plan.penalty.mu;
    b.h = plan.penalty.h;
    b.K = plan.noise.K;
    b.C_omega = plan.penalty.C_omega;

    PenaltyConfig pc;
    pc.sigma = plan.sigma;
    pc.K = plan.noise.K;
    pc.mu = plan.penalty.mu;
    pc.h = plan.penalty.h;
    pc.C_omega = plan.penalty.C_omega;
    pc.phi_max = b.phi_max;
    pc.omega_max_1 = ric.omega_max;
    pc.p = b.p;
    pc.n = b.n;

    double r_max = 0.0;
    for (const auto& sm : plan.truth.smoothness) r_max = std::max(r_max, sm.r);
    const double g2 = 1.0 + std::abs(plan.time_tilt);
    const double V = plan.dictionary.kind == DictionaryKind::Gaussian ? 3.0 : 1.0;
    csv += std::to_string(n) + ',' + std::to_string(L_plus_1) + ',' +
           fmt17(delta_hat(pc)) + ',' + fmt17(delta_lower(b)) + ',' +
           fmt17(delta_upper(b)) + ',' + fmt17(delta_highprob(b)) + ',' +
           fmt17(n_low(b, r_max)) + ',' +
           fmt17(n_min_upper(b, L_plus_1 - 1, ric.U_mu_sq, std::sqrt(2.0), g2)) + ',' +
           (mu_feasible(b, L_plus_1 - 1, ric.U_mu_sq, V) ? "1" : "0") + '\n';
  }
  const fs::path dir(flags.out_dir);
  atomic_write_file(dir / "bounds.csv", csv);
  write_manifest(dir, plan);
  std::printf("bounds written to %s\n", (dir / "bounds.csv").c_str());
  return 0;
}

int cmd_diagnose(const CommonFlags& flags, int aleph, int draws, int probes) {
  const ExperimentPlan plan = load_plan(flags);
  const long n = plan.n_grid.back();
  const int L_plus_1 =
      plan.L_override >= 0
          ? plan.L_override + 1
          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const BasisSpec spec = make_basis(plan.basis_kind, L_plus_1);
  const BlockLayout layout = BlockLayout::for_sample_size(L_plus_1, n);
  const CoefficientMatrix truth =
      generate_truth(plan.truth, layout, derive_seed(plan.master_seed, 0xA0, 0));
  const Dataset data =
      generate_dataset(truth, plan.dictionary, plan.noise, plan.sigma,
                       static_cast<int>(n), derive_seed(plan.master_seed, 0xB0, 0, 0),
                       TimeDensity{plan.time_tilt});

  const auto eigs = restricted_eigs(data, spec, aleph, draws,
                                    derive_seed(plan.master_seed, 0xD0), plan.threads);
  std::string csv = "draw,lambda_min,lambda_max,subset\n";
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    std::string subset;
    for (int j : eigs[i].subset) subset += (subset.empty() ? "" : "|") + std::to_string(j);
    csv += std::to_string(i) + ',' + fmt17(eigs[i].lambda_min) + ',' +
           fmt17(eigs[i].lambda_max) + ',' + subset + '\n';
  }
  const fs::path dir(flags.out_dir);
  atomic_write_file(dir / "restricted_eigs.csv", csv);

  // cone diagnostic on the truth's nonzero blocks
  std::vector<std::pair<int, int>> support;
  const CoefficientMatrix trunc = truncate_columns(truth, layout);
  for (int j = 0; j < trunc.p(); ++j)
    for (int l = 0; l < layout.block_count(); ++l) {
      const auto& blk = layout.blocks[l];
      if (trunc.entries.row(j).segment(blk.start, blk.len).cwiseAbs().maxCoeff() > 0.0)
        support.emplace_back(j, l);
    }
  std::string cone = "min_rayleigh_ratio = ";
  if (support.empty())
    cone += "nan (empty support)\n";
  else
    cone += fmt17(cone_condition_probe(data, spec, layout, support, probes,
                                       derive_seed(plan.master_seed, 0xC0))) +
            "\n";
  atomic_write_file(dir / "cone_probe.txt", cone);
  write_manifest(dir, plan);
  std::printf("diagnostics written to %s\n", flags.out_dir.c_str());
  return 0;
}

int cmd_fit(const std::string& data_path, double sigma, const std::string& basis_name,
            int L, double mu, double h, double c_omega, double delta_multiplier,
            std::uint64_t seed, const std::string& out_dir) {
  const Dataset data = dataset_from_csv(read_file(data_path), sigma);
  const int L_plus_1 =
      L >= 0 ? L + 1
             : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(data.n()))));
  const BasisSpec spec = make_basis(basis_kind_from(basis_name), L_plus_1);
  const BlockLayout layout = BlockLayout::for_sample_size(L_plus_1, data.n());

  PenaltyConfig cfg;
  cfg.sigma = sigma;
  cfg.mu = mu;
  cfg.h = h;
  cfg.C_omega = c_omega;
  cfg.phi_max = 1.0;
  cfg.omega_max_1 = estimate_omega_max_1(data);
  cfg.p = static_cast<double>(data.p());
  cfg.n = static_cast<double>(data.n());
  const double delta = delta_hat(cfg) * delta_multiplier;

  SolverSettings settings;
  const FitResult result = fit(data, spec, layout, delta, settings);
  const fs::path dir(out_dir);
  write_fit_result(dir, result, settings, seed);

  std::string manifest = "# ";
  manifest += kVersion;
  manifest += '\n';
  manifest += "data = " + data_path + '\n';
  manifest += "sigma = " + fmt17(sigma) + '\n';
  manifest += "basis.kind = " + basis_name + '\n';
  manifest += "basis.L = " + std::to_string(L_plus_1 - 1) + '\n';
  manifest += "penalty.mu = " + fmt17(mu) + '\n';
  manifest += "penalty.h = " + fmt17(h) + '\n';
  manifest += "penalty.C_omega = " + fmt17(c_omega) + '\n';
  manifest += "penalty.delta_multiplier = " + fmt17(delta_multiplier) + '\n';
  manifest += "delta = " + fmt17(delta) + '\n';
  manifest += "seed = " + std::to_string(seed) + '\n';
  atomic_write_file(dir / "manifest.txt", manifest);

  std::printf("fit: %s after %d iterations, kkt %.3e, delta %.6g\n",
              result.converged ? "converged" : "NOT CONVERGED", result.iterations,
              result.kkt_residual, delta);
  return result.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse varying-coefficient estimation and bound verification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;

  auto* fit_cmd = app.add_subcommand("fit", "fit the block-LASSO estimator to a dataset CSV");
  fit_cmd->set_help_flag("--help", "print help");  // frees -h for the slack parameter
  std::string data_path, basis_name = "fourier";
  int L = -1;
  double sigma = -1.0, mu = 2.0, h = 0.5, c_omega = 1.0, delta_multiplier = 1.0;
  std::uint64_t fit_seed = 1;
  fit_cmd->add_option("--data", data_path, "dataset CSV (i,t,Y,W_1,...)")->required();
  fit_cmd->add_option("--sigma", sigma, "known noise level (required)");
  fit_cmd->add_option("--basis", basis_name, "fourier|haar");
  fit_cmd->add_option("--L", L, "basis truncation L (default: L+1 = ceil(sqrt(n)))");
  fit_cmd->add_option("--mu", mu, "confidence exponent");
  fit_cmd->add_option("--h", h, "eigenvalue slack in (0,1)");
  fit_cmd->add_option("--c-omega", c_omega, "penalty constant C_omega");
  fit_cmd->add_option("--delta-multiplier", delta_multiplier, "scales delta_hat");
  fit_cmd->add_option("--seed", fit_seed, "recorded seed");
  fit_cmd->add_option("--out", flags.out_dir, "output directory");

  auto* exp_cmd = app.add_subcommand("experiment", "run a seeded Monte Carlo plan");
  exp_cmd->add_option("--config,--plan", flags.config_path, "plan config file")->required();
  exp_cmd->add_option("--out", flags.out_dir, "output directory");
  exp_cmd->add_option("--threads", flags.threads, "worker threads (overrides config)");
  exp_cmd->add_option("--seed", flags.seed, "master seed (overrides config)");

  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form risk bounds");
  bounds_cmd->add_option("--config,--plan", flags.config_path, "plan config file")->required();
  bounds_cmd->add_option("--out", flags.out_dir, "output directory");

  auto* diag_cmd = app.add_subcommand("diagnose",
                                      "restricted-eigenvalue and cone diagnostics");
  diag_cmd->add_option("--config,--plan", flags.config_path, "plan config file")->required();
  diag_cmd->add_option("--out", flags.out_dir, "output directory");
  diag_cmd->add_option("--threads", flags.threads, "worker threads");
  diag_cmd->add_option("--seed", flags.seed, "master seed (overrides config)");
  int aleph = 5, draws = 100, probes = 200;
  diag_cmd->add_option("--aleph", aleph, "restricted subset size");
  diag_cmd->add_option("--draws", draws, "number of random subsets");
  diag_cmd->add_option("--probes", probes, "cone probe count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fit_cmd)) {
      if (sigma < 0.0) {
        std::fprintf(stderr, "error: missing --sigma (the known noise level sigma is a required model input)\n");
        return 1;
      }
      return cmd_fit(data_path, sigma, basis_name, L, mu, h, c_omega,
                     delta_multiplier, fit_seed, flags.out_dir);
    }
    if (app.got_subcommand(exp_cmd)) return cmd_experiment(flags);
    if (app.got_subcommand(bounds_cmd)) return cmd_bounds(flags);
    if (app.got_subcommand(diag_cmd)) return cmd_diagnose(flags, aleph, draws, probes);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
