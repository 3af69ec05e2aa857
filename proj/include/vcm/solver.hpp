#pragma once

#include <Eigen/Core>
#include <vector>

#include "vcm/design.hpp"
#include "vcm/model_core.hpp"

namespace vcm {

// Ingredients of the adaptive penalty
//   delta_hat = 2 (sigma C_omega K sqrt(mu) + 1) sqrt((1+h) phi_max omega_max(1) log(p) / n).
// p and n enter only through log(p)/n and are kept as reals.
struct PenaltyConfig {
  double sigma = 1.0;
  double K = 1.0;          // sub-Gaussian norm bound of the noise
  double mu = 2.0;         // confidence exponent
  double h = 0.5;          // eigenvalue slack, in (0,1)
  double C_omega = 1.0;    // tuning default, overridable
  double phi_max = 1.0;
  double omega_max_1 = 1.0;  // largest diagonal entry of Omega
  double p = 2.0;
  double n = 1.0;
};

double delta_hat(const PenaltyConfig& cfg);

// max_j n^-1 sum_i (W_i^(j))^2, the plug-in estimate of omega_max(1)
double estimate_omega_max_1(const Dataset& data);

// Proximal operator of tau * ||.||_2: full shrinkage when ||v|| <= tau,
// else v (1 - tau/||v||). Scalar soft-thresholding for length-1 groups.
Eigen::VectorXd block_prox(const Eigen::VectorXd& v, double tau);

struct SolverSettings {
  int max_iters = 5000;
  double rel_tol = 1e-8;              // relative objective change
  double step_backtrack_factor = 0.5; // in (0,1)
  bool restart = true;                // objective-increase restart

  bool operator==(const SolverSettings&) const = default;
};

struct FitResult {
  CoefficientMatrix A_hat;
  std::vector<double> objective_trace;  // non-increasing when restart enabled
  int iterations = 0;
  double kkt_residual = 0.0;  // max blockwise subgradient violation
  double delta_used = 0.0;
  bool converged = false;  // false flags non-convergence; never thrown
};

// Block-LASSO program  min_a n^-1 ||Y - B a||^2 + delta ||a||_block  solved by
// FISTA with backtracking and function-value restart. B is applied through its
// rank-structured factors (W, phi(t_i)) and never materialized.
FitResult fit(const Dataset& data, const BasisSpec& spec, const BlockLayout& layout,
              double delta, const SolverSettings& settings = {});

// Same program with the ball constraint ||a||^2 <= p C_f^2; the composite prox
// (block norm + ball) has no closed form and is evaluated by Dykstra-style
// alternation of the two individual proxes.
FitResult fit_constrained(const Dataset& data, const BasisSpec& spec,
                          const BlockLayout& layout, double delta, double C_f,
                          const SolverSettings& settings = {});

// Max over blocks of the subgradient violation at A for the unconstrained
// program (exposed for tests and diagnostics).
double kkt_block_residual(const Dataset& data, const BasisSpec& spec,
                          const CoefficientMatrix& A, double delta);

}  // namespace vcm
