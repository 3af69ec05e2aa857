#include "vcm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vcm/io.hpp"
#include "vcm/parallel.hpp"
#include "vcm/rng.hpp"

namespace vcm {

namespace {

double quantile(std::vector<double> v, double alpha) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = alpha * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

SlopeFit ols_loglog(const std::vector<double>& risks, const std::vector<long>& ns) {
  SlopeFit fitted;
  const std::size_t m = risks.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(risks[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double dm = static_cast<double>(m);
  const double vxx = sxx - sx * sx / dm;
  const double vxy = sxy - sx * sy / dm;
  const double vyy = syy - sy * sy / dm;
  fitted.slope = vxy / vxx;
  fitted.intercept = (sy - fitted.slope * sx) / dm;
  fitted.r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fitted;
}

}  // namespace

void ExperimentPlan::validate() const {
  truth.validate();
  if (truth.p != dictionary.p)
    throw std::invalid_argument("plan: truth.p != dictionary.p");
  if (replicates < 1) throw std::invalid_argument("plan: replicates < 1");
  if (n_grid.empty()) throw std::invalid_argument("plan: empty n_grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("plan: n_grid must be strictly increasing");
  if (!(sigma >= 0.0)) throw std::invalid_argument("plan: sigma < 0");
  if (threads < 1) throw std::invalid_argument("plan: threads < 1");
}

SupportMetrics support_metrics(const CoefficientMatrix& A_hat,
                               const TruthSpec& spec,
                               const CoefficientMatrix& truth) {
  if (A_hat.p() != truth.p() || A_hat.cols() > truth.cols())
    throw std::invalid_argument("support_metrics: dimension mismatch");
  SupportMetrics m;
  std::vector<char> truth_nonzero(static_cast<std::size_t>(spec.p), 0);
  for (int j : spec.varying_indices) truth_nonzero[j] = 1;
  for (int j : spec.constant_indices) truth_nonzero[j] = 1;

  int selected = 0, hits = 0;
  const int total_true = spec.s() + spec.s0();
  for (int j = 0; j < A_hat.p(); ++j) {
    const bool sel = A_hat.entries.row(j).cwiseAbs().maxCoeff() > 0.0;
    if (sel) {
      ++selected;
      if (truth_nonzero[j]) ++hits;
    }
  }
  m.precision = selected > 0 ? static_cast<double>(hits) / selected : 1.0;
  m.recall = total_true > 0 ? static_cast<double>(hits) / total_true : 1.0;

  long zero_blocks = 0, zero_blocks_exact = 0;
  for (const auto& blk : A_hat.layout.blocks)
    for (int j = 0; j < A_hat.p(); ++j) {
      const bool truly_zero =
          truth.entries.row(j).segment(blk.start, blk.len).cwiseAbs().maxCoeff() == 0.0;
      if (!truly_zero) continue;
      ++zero_blocks;
      if (A_hat.entries.row(j).segment(blk.start, blk.len).cwiseAbs().maxCoeff() == 0.0)
        ++zero_blocks_exact;
    }
  m.zero_block_fraction =
      zero_blocks > 0 ? static_cast<double>(zero_blocks_exact) / zero_blocks : 1.0;
  return m;
}

SlopeFit slope_fit(const std::vector<double>& median_risks,
                   const std::vector<long>& n_grid) {
  if (median_risks.size() != n_grid.size())
    throw std::invalid_argument("slope_fit: size mismatch");
  if (median_risks.size() < 3)
    throw std::invalid_argument("slope_fit: need at least 3 grid points");
  for (double rsk : median_risks)
    if (!(rsk > 0.0)) throw std::invalid_argument("slope_fit: nonpositive risk");
  return ols_loglog(median_risks, n_grid);
}

ExperimentResult run_plan(const ExperimentPlan& plan) {
  plan.validate();
  const int n_count = static_cast<int>(plan.n_grid.size());
  const int reps = plan.replicates;

  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(n_count) * reps);
  double r_min = std::numeric_limits<double>::infinity();
  for (const auto& sm : plan.truth.smoothness) r_min = std::min(r_min, sm.r);
  result.theory_slope = plan.truth.s() > 0 ? -2.0 * r_min / (2.0 * r_min + 1.0) : -1.0;

  // truths are fixed per n; replicates resample W, t and the noise only
  std::vector<CoefficientMatrix> truths(static_cast<std::size_t>(n_count));
  std::vector<BlockLayout> layouts(static_cast<std::size_t>(n_count));
  std::vector<BasisSpec> bases(static_cast<std::size_t>(n_count));
  for (int ni = 0; ni < n_count; ++ni) {
    const long n = plan.n_grid[ni];
    const int L_plus_1 =
        plan.L_override >= 0
            ? plan.L_override + 1
            : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    layouts[ni] = BlockLayout::for_sample_size(L_plus_1, n);
    bases[ni] = make_basis(plan.basis_kind, L_plus_1);
    truths[ni] = generate_truth(plan.truth, layouts[ni],
                                derive_seed(plan.master_seed, 0xA0, ni));
  }

  parallel_for(n_count * reps, plan.threads, [&](int task) {
    const int ni = task / reps;
    const int rep = task % reps;
    const long n = plan.n_grid[ni];
    const std::uint64_t seed = derive_seed(plan.master_seed, 0xB0, ni, rep);

    const Dataset data =
        generate_dataset(truths[ni], plan.dictionary, plan.noise, plan.sigma,
                         static_cast<int>(n), seed, TimeDensity{plan.time_tilt});

    PenaltyConfig cfg;
    cfg.sigma = plan.sigma;
    cfg.K = plan.noise.K;
    cfg.mu = plan.penalty.mu;
    cfg.h = plan.penalty.h;
    cfg.C_omega = plan.penalty.C_omega;
    cfg.phi_max = 1.0 + std::abs(plan.time_tilt);
    cfg.omega_max_1 = estimate_omega_max_1(data);
    cfg.p = static_cast<double>(plan.dictionary.p);
    cfg.n = static_cast<double>(n);
    const double delta = delta_hat(cfg) * plan.penalty.delta_multiplier;

    const FitResult fitres = fit(data, bases[ni], layouts[ni], delta, plan.solver);

    RunRow row;
    row.n = n;
    row.replicate = rep;
    row.seed = seed;
    row.delta = delta;
    row.iters = fitres.iterations;
    row.kkt = fitres.kkt_residual;
    row.converged = fitres.converged;
    row.risk_infit = l2_risk(fitres.A_hat, truncate_columns(truths[ni], layouts[ni]));
    row.risk_tail = tail_mass(truths[ni], layouts[ni].L_plus_1);
    row.risk = row.risk_infit + row.risk_tail;
    const SupportMetrics sm = support_metrics(fitres.A_hat, plan.truth, truths[ni]);
    row.precision = sm.precision;
    row.recall = sm.recall;
    row.zero_block_frac = sm.zero_block_fraction;
    result.rows[static_cast<std::size_t>(task)] = row;
  });

  std::vector<double> medians;
  std::vector<long> ns_with_medians;
  for (int ni = 0; ni < n_count; ++ni) {
    std::vector<double> risks;
    for (int rep = 0; rep < reps; ++rep) {
      const RunRow& row = result.rows[static_cast<std::size_t>(ni) * reps + rep];
      if (row.converged)
        risks.push_back(row.risk);
      else
        ++result.flagged;
    }
    AggregateRow agg;
    agg.n = plan.n_grid[ni];
    agg.median_risk = quantile(risks, 0.5);
    agg.q25 = quantile(risks, 0.25);
    agg.q75 = quantile(risks, 0.75);
    if (!risks.empty() && agg.median_risk > 0.0) {
      medians.push_back(agg.median_risk);
      ns_with_medians.push_back(plan.n_grid[ni]);
    }
    agg.slope_running = medians.size() >= 2
                            ? ols_loglog(medians, ns_with_medians).slope
                            : std::numeric_limits<double>::quiet_NaN();
    result.aggregates.push_back(agg);
  }
  if (medians.size() >= 3) {
    const SlopeFit sf = ols_loglog(medians, ns_with_medians);
    result.slope = sf.slope;
    result.intercept = sf.intercept;
    result.r2 = sf.r2;
  }
  return result;
}

std::string results_csv(const ExperimentResult& result) {
  std::string out =
      "n,replicate,seed,risk,risk_infit,risk_tail,precision,recall,"
      "zero_block_frac,delta,iters,kkt,converged\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.n) + ',' + std::to_string(row.replicate) + ',' +
           std::to_string(row.seed) + ',' + fmt17(row.risk) + ',' +
           fmt17(row.risk_infit) + ',' + fmt17(row.risk_tail) + ',' +
           fmt17(row.precision) + ',' + fmt17(row.recall) + ',' +
           fmt17(row.zero_block_frac) + ',' + fmt17(row.delta) + ',' +
           std::to_string(row.iters) + ',' + fmt17(row.kkt) + ',' +
           (row.converged ? "1" : "0") + '\n';
  }
  return out;
}

std::string aggregates_csv(const ExperimentResult& result) {
  std::string out = "n,median_risk,q25,q75,slope_running\n";
  for (const auto& agg : result.aggregates)
    out += std::to_string(agg.n) + ',' + fmt17(agg.median_risk) + ',' +
           fmt17(agg.q25) + ',' + fmt17(agg.q75) + ',' +
           fmt17(agg.slope_running) + '\n';
  return out;
}

}  // namespace vcm
