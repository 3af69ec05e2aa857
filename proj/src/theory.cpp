#include "vcm/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace vcm {

namespace {

void check_budget(const Eigen::VectorXd& coeffs, double r, double nu, double c_a) {
  if (nu < 1.0) throw std::invalid_argument("audit: nu < 1");
  if (r <= std::min(0.5, 1.0 / nu))
    throw std::invalid_argument("audit: r <= min(1/2, 1/nu)");
  const double rp = r + 0.5 - 1.0 / nu;
  double budget = 0.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    budget += std::pow(std::abs(coeffs(k)), nu) * std::pow(k + 1.0, nu * rp);
  if (budget > std::pow(c_a, nu) * (1.0 + 1e-12))
    throw std::invalid_argument("audit: coefficients violate the smoothness budget");
}

}  // namespace

double delta_lower(const TheoryBounds& b) {
  const double constant_term =
      b.kappa * b.sigma * b.sigma * b.s0 / (4.0 * b.n * b.omega_max_s * b.phi_max);
  double varying_term = 0.0;
  for (const auto& sm : b.smoothness) {
    const double expo = 2.0 * sm.r / (2.0 * sm.r + 1.0);
    varying_term += std::pow(b.c_a, 2.0 / (2.0 * sm.r + 1.0)) *
                    std::pow(b.sigma * b.sigma * b.kappa /
                                 (b.n * b.omega_max_s * b.phi_max),
                             expo);
  }
  return std::max(constant_term, varying_term / 8.0);
}

double delta_upper(const TheoryBounds& b) {
  const double lp = std::log(b.p);
  double sum = b.sigma * b.sigma * b.s0 * lp / (b.n * b.omega_min_s);
  for (const auto& sm : b.smoothness) {
    const double expo = 2.0 * sm.r / (2.0 * sm.r + 1.0);
    sum += std::pow(b.c_a, 2.0 / (2.0 * sm.r + 1.0)) *
           std::pow(b.sigma * b.sigma / (b.n * b.omega_min_s), expo) *
           std::pow(lp, expo);
  }
  return b.C_const * (b.omega_max_s / b.omega_min_s) * sum;
}

double delta_highprob(const TheoryBounds& b) {
  const double lp = std::log(b.p);
  const double ln = std::log(b.n);
  const double noise = b.C_omega * b.sigma * b.sigma * b.K * b.K * b.mu + 1.0;
  const double denom = b.n * (1.0 - b.h) * b.omega_min_s * b.phi_min;
  double bracket = noise * (b.s0 + b.s) * lp / denom;
  for (const auto& sm : b.smoothness) {
    const double expo = 2.0 * sm.r / (2.0 * sm.r + 1.0);
    const double logn_expo = (std::max(0.0, 2.0 - sm.nu) - 2.0 * sm.nu * sm.r) /
                             (sm.nu * (2.0 * sm.r + 1.0));
    bracket += std::pow(b.c_a, 2.0 / (2.0 * sm.r + 1.0)) *
               std::pow(noise / denom, expo) * std::pow(ln, logn_expo) *
               std::pow(lp, expo);
  }
  const double front = (1.0 + b.h) * b.omega_max_s * b.phi_max /
                       ((1.0 - b.h) * b.omega_min_s * b.phi_min);
  return b.c_a * b.c_a * b.s / (b.n * b.n) + b.C_const * front * bracket;
}

double n_low(const TheoryBounds& b, double r_max) {
  if (b.s < 1) throw std::invalid_argument("n_low: s >= 1 required");
  return 2.0 * b.sigma * b.sigma * b.kappa /
         (b.c_a * b.c_a * b.omega_max_s * b.phi_max) *
         std::max(1.0, std::pow(6.0 / b.s, 2.0 * r_max + 1.0));
}

double n_min_subset(const TheoryBounds& b, int aleph, int L, double U_mu_sq,
                    double C_phi) {
  return 64.0 * b.mu * aleph * (L + 1.0) * std::log(b.p + L) * C_phi * C_phi *
         U_mu_sq * b.phi_max * b.omega_max_s /
         (b.h * b.h * b.phi_min * b.phi_min * b.omega_min_s * b.omega_min_s);
}

double n_min_upper(const TheoryBounds& b, int L, double U_mu_sq, double C_phi,
                   double g2) {
  const double lp = std::log(b.p);
  const double first = n_min_subset(b, b.s + b.s0, L, U_mu_sq, C_phi);
  const double second =
      U_mu_sq * C_phi * C_phi * (L + 1.0) * b.mu * lp / (g2 * b.omega_max_s);
  const double third = 3.0 * b.c_a * b.c_a * g2 * b.s * b.omega_max_s;
  return std::max(first, std::max(second, third));
}

bool mu_feasible(const TheoryBounds& b, int L, double U_mu_sq, double V) {
  const double lhs = std::pow(b.p, b.mu);
  const double first = std::sqrt(2.0 * V) * b.n /
                       (8.0 * b.mu * std::sqrt(static_cast<double>(b.s + b.s0)) *
                        U_mu_sq * std::log(b.p + L));
  const double second = 2.0 * L / std::log(b.n);
  const double third = 2.0 * b.n;
  return lhs >= std::max(first, std::max(second, third));
}

RatioRegime error_ratio_regime(const TheoryBounds& b) {
  if (b.smoothness.empty())
    throw std::invalid_argument("error_ratio_regime: needs a varying set");
  const double r = b.smoothness.front().r;
  const double nu = b.smoothness.front().nu;
  for (const auto& sm : b.smoothness)
    if (sm.r != r || sm.nu != nu)
      throw std::invalid_argument("error_ratio_regime: requires common (r, nu)");
  if (b.s0 < 1) throw std::invalid_argument("error_ratio_regime: s0 >= 1 required");
  const double lhs = b.sigma * b.sigma *
                     std::pow(static_cast<double>(b.s) / b.s0, 2.0 * r + 1.0);
  if (lhs >= b.n * b.omega_min_s) return RatioRegime::LogP;
  return nu < 2.0 ? RatioRegime::LogPPower : RatioRegime::Constant;
}

AuditResult block_error_bound_audit(const Eigen::VectorXd& coeffs, int d,
                                    double eps, double r, double nu, double c_a) {
  if (d < 1) throw std::invalid_argument("block-error audit: d < 1");
  if (!(eps > 0.0)) throw std::invalid_argument("block-error audit: eps <= 0");
  check_budget(coeffs, r, nu, c_a);
  AuditResult res;
  const Eigen::Index m = coeffs.size();
  for (Eigen::Index start = 1; start < m; start += d) {
    const Eigen::Index len = std::min<Eigen::Index>(d, m - start);
    res.lhs += std::min(coeffs.segment(start, len).squaredNorm(), eps * d);
  }
  res.rhs = std::pow(c_a, 2.0 / (2.0 * r + 1.0)) *
            std::pow(eps, 2.0 * r / (2.0 * r + 1.0)) *
            std::pow(static_cast<double>(d),
                     std::max(0.0, 2.0 - nu) / (nu * (2.0 * r + 1.0)));
  res.pass = res.lhs <= res.rhs;
  return res;
}

AuditResult tail_bound_audit(const Eigen::VectorXd& coeffs, int J, double r,
                             double nu, double c_a) {
  if (J < 1) throw std::invalid_argument("tail audit: J >= 1 required");
  check_budget(coeffs, r, nu, c_a);
  AuditResult res;
  if (J + 1 < coeffs.size())
    res.lhs = coeffs.tail(coeffs.size() - (J + 1)).squaredNorm();
  const double rp = r + 0.5 - 1.0 / nu;
  const double rstar = std::min(r, rp);
  res.rhs = c_a * c_a * std::pow(J + 1.0, -2.0 * rstar);
  res.pass = res.lhs <= res.rhs;
  return res;
}

AuditResult uniform_bound_audit(const Eigen::VectorXd& coeffs,
                                const BasisSpec& spec, int J, double r,
                                double nu, double c_a, int grid_size) {
  const double rp = r + 0.5 - 1.0 / nu;
  if (rp < 2.0) throw std::invalid_argument("uniform audit: requires r' >= 2");
  if (spec.L_plus_1 < coeffs.size())
    throw std::invalid_argument("uniform audit: basis narrower than coefficients");
  check_budget(coeffs, r, nu, c_a);
  AuditResult res;
  for (int g = 0; g < grid_size; ++g) {
    const double t = (g + 0.5) / grid_size;
    const Eigen::VectorXd phi = eval_basis(spec, t);
    double diff = 0.0;  // tail sum_{k>J} a_k phi_k(t), coefficients k >= 1
    for (Eigen::Index k = J + 1; k < coeffs.size(); ++k) diff += coeffs(k) * phi(k);
    res.lhs = std::max(res.lhs, std::abs(diff));
  }
  const double rstar = std::min(r, rp);
  res.rhs = c_a * spec.c_phi * std::pow(J + 1.0, -(rstar - 0.5));
  res.pass = res.lhs <= res.rhs;
  return res;
}

}  // namespace vcm
