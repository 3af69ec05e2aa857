#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcm/basis.hpp"
#include "vcm/model_core.hpp"
#include "vcm/solver.hpp"
#include "vcm/synth.hpp"

namespace vcm {

struct PenaltyOverrides {
  double mu = 2.0;
  double h = 0.5;
  double C_omega = 1.0;
  double delta_multiplier = 1.0;

  bool operator==(const PenaltyOverrides&) const = default;
};

struct ExperimentPlan {
  std::string name = "plan";
  DictionarySpec dictionary;
  TruthSpec truth;
  NoiseSpec noise;
  double sigma = 0.5;
  std::vector<long> n_grid;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  PenaltyOverrides penalty;
  SolverSettings solver;
  BasisKind basis_kind = BasisKind::Fourier;
  int L_override = -1;  // -1 ties L+1 = ceil(sqrt(n))
  double time_tilt = 0.0;
  double kappa = 0.1;  // used by the bound evaluators
  int threads = 1;

  void validate() const;

  bool operator==(const ExperimentPlan&) const = default;
};

struct RunRow {
  long n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double risk = 0.0;
  double risk_infit = 0.0;
  double risk_tail = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double zero_block_frac = 0.0;
  double delta = 0.0;
  int iters = 0;
  double kkt = 0.0;
  bool converged = false;
};

struct AggregateRow {
  long n = 0;
  double median_risk = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double slope_running = 0.0;  // NaN until two grid points are available
};

struct ExperimentResult {
  std::vector<RunRow> rows;            // |n_grid| * replicates, ordered
  std::vector<AggregateRow> aggregates;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double theory_slope = 0.0;  // -2r/(2r+1) from the slowest varying row
  int flagged = 0;            // non-converged rows (excluded from aggregates)
};

ExperimentResult run_plan(const ExperimentPlan& plan);

struct SupportMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double zero_block_fraction = 1.0;
};

// Selection metrics of A_hat against the truth pattern; a covariate is
// selected iff any of its blocks is nonzero.
SupportMetrics support_metrics(const CoefficientMatrix& A_hat,
                               const TruthSpec& spec,
                               const CoefficientMatrix& truth);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// OLS of log(median risk) on log(n); requires >= 3 points and positive risks.
SlopeFit slope_fit(const std::vector<double>& median_risks,
                   const std::vector<long>& n_grid);

// Column contracts:
//   n,replicate,seed,risk,risk_infit,risk_tail,precision,recall,
//   zero_block_frac,delta,iters,kkt,converged
std::string results_csv(const ExperimentResult& result);
//   n,median_risk,q25,q75,slope_running
std::string aggregates_csv(const ExperimentResult& result);

}  // namespace vcm
