#pragma once

#include <Eigen/Core>
#include <vector>

#include "vcm/basis.hpp"
#include "vcm/model_core.hpp"

namespace vcm {

// Inputs of the closed-form risk bounds. Restricted-isometry constants come
// from theoretical_ric for synthetic dictionaries or are user-supplied.
struct TheoryBounds {
  int s = 0;
  int s0 = 0;
  double n = 1.0;
  double p = 2.0;
  double sigma = 1.0;
  double c_a = 1.0;
  std::vector<SmoothnessSpec> smoothness;  // per j in the varying set
  double kappa = 0.1;                      // < 1/8 for lower bounds
  double omega_min_s = 1.0;
  double omega_max_s = 1.0;
  double phi_min = 1.0;
  double phi_max = 1.0;
  double mu = 2.0;
  double h = 0.5;
  double K = 1.0;
  double C_omega = 1.0;
  double C_const = 1.0;  // placeholder for the generic constants in the bounds
};

// max{ kappa sigma^2 s0 / (4 n omega_max phi_max),
//      (1/8) sum_j C_a^(2/(2r+1)) (sigma^2 kappa/(n omega_max phi_max))^(2r/(2r+1)) }
double delta_lower(const TheoryBounds& b);

// (omega_max/omega_min) [ sigma^2 s0 log p / (n omega_min)
//   + sum_j C_a^(2/(2r+1)) (sigma^2/(n omega_min))^(2r/(2r+1)) (log p)^(2r/(2r+1)) ]
// times C_const; the simplified envelope without log n factors.
double delta_upper(const TheoryBounds& b);

// The high-probability bound with its (log n)-power factors and the
// (C_omega sigma^2 K^2 mu + 1) noise constant, times C_const.
double delta_highprob(const TheoryBounds& b);

// (2 sigma^2 kappa / (C_a^2 omega_max phi_max)) max{1, (6/s)^(2 r_max + 1)}
double n_low(const TheoryBounds& b, double r_max);

// Sample-size threshold for restricted-eigenvalue concentration over
// subsets of size aleph, using the omega constants stored in b.
double n_min_subset(const TheoryBounds& b, int aleph, int L, double U_mu_sq,
                    double C_phi);

// Three-way max defining the sample-size threshold for the upper bounds;
// the first term is n_min_subset at aleph = s + s0.
double n_min_upper(const TheoryBounds& b, int L, double U_mu_sq, double C_phi,
                   double g2);

// p^mu >= max{ sqrt(2V) n / (8 mu sqrt(s+s0) U_mu^2 log(p+L)), 2L/log n, 2n }
bool mu_feasible(const TheoryBounds& b, int L, double U_mu_sq, double V);

enum class RatioRegime { LogP, LogPPower, Constant };

// Regime of the upper/lower ratio for common (r, nu):
// sigma^2 (s/s0)^(2r+1) >= n omega_min -> LogP; otherwise LogPPower for
// nu < 2 and Constant for nu >= 2.
RatioRegime error_ratio_regime(const TheoryBounds& b);

struct AuditResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Blockwise truncation inequality: sum_l min(||a_l||^2, eps d) against
// C_a^(2/(2r+1)) eps^(2r/(2r+1)) d^((2-nu)+/(nu(2r+1))), blocks of length d
// over coefficients k >= 1. Throws if the coefficients violate the
// smoothness budget.
AuditResult block_error_bound_audit(const Eigen::VectorXd& coeffs, int d,
                                    double eps, double r, double nu, double c_a);

// sum_{k>J} a_k^2 against C_a^2 (J+1)^(-2 r*), r* = min(r, r').
AuditResult tail_bound_audit(const Eigen::VectorXd& coeffs, int J, double r,
                             double nu, double c_a);

// sup_t |f - f_J| over a uniform grid against C_a C_phi (J+1)^-(r*-1/2);
// requires r' >= 2. f runs over coefficients k >= 1.
AuditResult uniform_bound_audit(const Eigen::VectorXd& coeffs,
                                const BasisSpec& spec, int J, double r,
                                double nu, double c_a, int grid_size = 10000);

}  // namespace vcm
