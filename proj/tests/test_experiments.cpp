#include <doctest.h>

#include <cmath>

#include "vcm/experiments.hpp"
#include "vcm/rng.hpp"
#include "vcm/solver.hpp"

using namespace vcm;

namespace {

ExperimentPlan tiny_plan() {
  ExperimentPlan plan;
  plan.name = "tiny";
  plan.dictionary = {DictionaryKind::Gaussian, 6};
  plan.truth.p = 6;
  plan.truth.varying_indices = {0};
  plan.truth.smoothness = {{2.0, 2.0}};
  plan.truth.constant_indices = {1};
  plan.truth.c_a = 1.0;
  plan.noise = {NoiseKind::Gaussian, 1.0};
  plan.sigma = 0.3;
  plan.n_grid = {64, 128};
  plan.replicates = 3;
  plan.master_seed = 424242;
  plan.threads = 2;
  return plan;
}

}  // namespace

TEST_CASE("slope fit recovers exact power laws") {
  const std::vector<long> ns = {100, 200, 400, 800};
  std::vector<double> risks;
  for (long n : ns) risks.push_back(3.7 * std::pow(static_cast<double>(n), -0.8));
  const SlopeFit sf = slope_fit(risks, ns);
  CHECK(sf.slope == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(sf.r2 == doctest::Approx(1.0).epsilon(1e-12));

  const SlopeFit flat = slope_fit({2.0, 2.0, 2.0}, {10, 20, 40});
  CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(slope_fit({1.0, 2.0}, {10, 20}), std::invalid_argument);
  CHECK_THROWS_AS(slope_fit({1.0, 0.0, 2.0}, {10, 20, 40}), std::invalid_argument);
}

TEST_CASE("support metrics") {
  TruthSpec spec;
  spec.p = 4;
  spec.varying_indices = {0};
  spec.smoothness = {{2.0, 2.0}};
  spec.constant_indices = {1};
  const BlockLayout layout = BlockLayout::make(5, 2);
  const CoefficientMatrix truth = generate_truth(spec, layout, 5);
  const CoefficientMatrix trunc = truncate_columns(truth, layout);

  // perfect recovery
  const SupportMetrics perfect = support_metrics(trunc, spec, trunc);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.zero_block_fraction == 1.0);

  // all-zero estimate: no recall, full zero-block credit
  const SupportMetrics empty = support_metrics(zero_coefficients(4, layout), spec, trunc);
  CHECK(empty.recall == 0.0);
  CHECK(empty.precision == 1.0);
  CHECK(empty.zero_block_fraction == 1.0);

  // spurious row lowers precision
  CoefficientMatrix noisy = trunc;
  noisy.entries(3, 2) = 0.5;
  const SupportMetrics spur = support_metrics(noisy, spec, trunc);
  CHECK(spur.precision == doctest::Approx(2.0 / 3.0));
  CHECK(spur.recall == 1.0);
  CHECK(spur.zero_block_fraction < 1.0);
}

TEST_CASE("single-cell plan produces exactly one row") {
  ExperimentPlan plan = tiny_plan();
  plan.n_grid = {64};
  plan.replicates = 1;
  const ExperimentResult result = run_plan(plan);
  CHECK(result.rows.size() == 1);
  CHECK(result.aggregates.size() == 1);
  CHECK(result.rows[0].n == 64);
  CHECK(std::isnan(result.aggregates[0].slope_running));
}

TEST_CASE("risk decomposition and penalty round-trip hold for every row") {
  const ExperimentPlan plan = tiny_plan();
  const ExperimentResult result = run_plan(plan);
  REQUIRE(result.rows.size() == 6);
  for (const auto& row : result.rows) {
    CHECK(row.risk == row.risk_infit + row.risk_tail);

    // delta recomputes from the recorded inputs up to the estimated
    // omega_max(1), which is itself a deterministic function of the seed
    const CoefficientMatrix truth = generate_truth(
        plan.truth, BlockLayout::for_sample_size(
                        static_cast<int>(std::ceil(std::sqrt(double(row.n)))), row.n),
        derive_seed(plan.master_seed, 0xA0, row.n == 64 ? 0 : 1));
    const Dataset data = generate_dataset(truth, plan.dictionary, plan.noise,
                                          plan.sigma, static_cast<int>(row.n), row.seed);
    PenaltyConfig cfg;
    cfg.sigma = plan.sigma;
    cfg.K = plan.noise.K;
    cfg.mu = plan.penalty.mu;
    cfg.h = plan.penalty.h;
    cfg.C_omega = plan.penalty.C_omega;
    cfg.omega_max_1 = estimate_omega_max_1(data);
    cfg.p = 6.0;
    cfg.n = static_cast<double>(row.n);
    CHECK(row.delta == delta_hat(cfg) * plan.penalty.delta_multiplier);
  }
}

TEST_CASE("runs are deterministic: same seed and any thread count") {
  ExperimentPlan plan = tiny_plan();
  plan.threads = 1;
  const std::string csv_a = results_csv(run_plan(plan));
  plan.threads = 3;
  const std::string csv_b = results_csv(run_plan(plan));
  CHECK(csv_a == csv_b);

  plan.master_seed += 1;
  const std::string csv_c = results_csv(run_plan(plan));
  CHECK(csv_a != csv_c);
}

TEST_CASE("tilted sampling density flows through the runner") {
  ExperimentPlan plan = tiny_plan();
  plan.time_tilt = 0.3;
  plan.n_grid = {128};
  plan.replicates = 2;
  const ExperimentResult result = run_plan(plan);
  for (const auto& row : result.rows) {
    CHECK(row.converged);
    CHECK(row.risk > 0.0);
  }
}

TEST_CASE("noiseless zero-penalty-multiplier risk shrinks with n") {
  ExperimentPlan plan = tiny_plan();
  plan.sigma = 0.0;
  plan.penalty.delta_multiplier = 1e-6;
  plan.n_grid = {128, 512};
  plan.replicates = 2;
  const ExperimentResult result = run_plan(plan);
  REQUIRE(result.aggregates.size() == 2);
  CHECK(result.aggregates[1].median_risk < result.aggregates[0].median_risk);
}
