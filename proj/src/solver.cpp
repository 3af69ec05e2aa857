#include "vcm/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vcm {

namespace {

// B and B^T applied through the factors W (p x n) and Phi ((L+1) x n):
// (B vec(A))_i = W_i^T A phi(t_i), and B^T v reshapes to (W diag(v)) Phi^T.
struct DesignOperator {
  const Eigen::MatrixXd& W;
  Eigen::MatrixXd Phi;
  double inv_n;

  DesignOperator(const Dataset& data, const BasisSpec& spec)
      : W(data.W),
        Phi(eval_basis_matrix(spec, data.times)),
        inv_n(1.0 / data.n()) {}

  Eigen::VectorXd forward(const Eigen::MatrixXd& A) const {
    return (W.array() * (A * Phi).array()).colwise().sum().transpose();
  }

  Eigen::MatrixXd adjoint(const Eigen::VectorXd& v) const {
    return (W * v.asDiagonal()) * Phi.transpose();
  }
};

void apply_block_prox(Eigen::MatrixXd& A, const BlockLayout& layout, double tau) {
  if (tau <= 0.0) return;
  for (const auto& blk : layout.blocks)
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
      auto seg = A.row(j).segment(blk.start, blk.len);
      const double nrm = seg.norm();
      if (nrm <= tau)
        seg.setZero();
      else
        seg *= (1.0 - tau / nrm);
    }
}

double layout_block_norm(const Eigen::MatrixXd& A, const BlockLayout& layout) {
  double total = 0.0;
  for (const auto& blk : layout.blocks)
    for (Eigen::Index j = 0; j < A.rows(); ++j)
      total += A.row(j).segment(blk.start, blk.len).norm();
  return total;
}

Eigen::MatrixXd project_ball(const Eigen::MatrixXd& A, double radius) {
  const double nrm = A.norm();
  if (nrm <= radius) return A;
  return A * (radius / nrm);
}

// Prox of tau*delta*||.||_block (+ ball indicator when radius < inf) by
// Dykstra alternation; exact single prox when unconstrained.
Eigen::MatrixXd composite_prox(const Eigen::MatrixXd& V, const BlockLayout& layout,
                               double tau_delta, double radius) {
  if (!(radius < std::numeric_limits<double>::infinity())) {
    Eigen::MatrixXd X = V;
    apply_block_prox(X, layout, tau_delta);
    return X;
  }
  Eigen::MatrixXd x = V;
  Eigen::MatrixXd pcorr = Eigen::MatrixXd::Zero(V.rows(), V.cols());
  Eigen::MatrixXd qcorr = pcorr;
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd y = x + pcorr;
    apply_block_prox(y, layout, tau_delta);
    pcorr = x + pcorr - y;
    Eigen::MatrixXd xnew = project_ball(y + qcorr, radius);
    qcorr = y + qcorr - xnew;
    const double change = (xnew - x).norm();
    x = std::move(xnew);
    if (change < 1e-12 * (1.0 + x.norm())) break;
  }
  return x;
}

// Start from B^T Y (falling back to all-ones): deterministic and equivariant
// under covariate permutation, so permuted problems run identical iterations.
double power_iteration_lipschitz(const DesignOperator& op,
                                 const Eigen::VectorXd& Y, int p, int Lp1) {
  Eigen::MatrixXd X = op.adjoint(Y);
  if (X.norm() == 0.0) X = Eigen::MatrixXd::Ones(p, Lp1);
  double lambda = 0.0;
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd Xnext = 2.0 * op.inv_n * op.adjoint(op.forward(X));
    lambda = Xnext.norm();
    if (lambda == 0.0) return 0.0;
    X = Xnext / lambda;
  }
  return lambda;
}

double kkt_from_gradient(const Eigen::MatrixXd& G, const Eigen::MatrixXd& A,
                         const BlockLayout& layout, double delta) {
  double worst = 0.0;
  for (const auto& blk : layout.blocks)
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
      const auto a = A.row(j).segment(blk.start, blk.len);
      const auto g = G.row(j).segment(blk.start, blk.len);
      const double nrm = a.norm();
      const double viol = nrm > 0.0
                              ? (g + delta * a / nrm).norm()
                              : std::max(0.0, g.norm() - delta);
      worst = std::max(worst, viol);
    }
  return worst;
}

// Ball-multiplier-adjusted residual for the constrained program; lambda is
// fitted by least squares over the nonzero blocks and clamped nonnegative.
double kkt_constrained(const Eigen::MatrixXd& G, const Eigen::MatrixXd& A,
                       const BlockLayout& layout, double delta, double radius) {
  const double sq = A.squaredNorm();
  if (sq < radius * radius * (1.0 - 1e-9))
    return kkt_from_gradient(G, A, layout, delta);
  double num = 0.0, den = 0.0;
  for (const auto& blk : layout.blocks)
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
      const auto a = A.row(j).segment(blk.start, blk.len);
      const double nrm = a.norm();
      if (nrm == 0.0) continue;
      const auto g = G.row(j).segment(blk.start, blk.len);
      num += (g + delta * a / nrm).dot(a);
      den += a.squaredNorm();
    }
  const double lambda = den > 0.0 ? std::max(0.0, -num / (2.0 * den)) : 0.0;
  return kkt_from_gradient(G + 2.0 * lambda * A, A, layout, delta);
}

FitResult run_fista(const Dataset& data, const BasisSpec& spec,
                    const BlockLayout& layout, double delta, double radius,
                    const SolverSettings& settings) {
  if (!(delta > 0.0)) throw std::invalid_argument("fit: delta must be positive");
  if (layout.L_plus_1 != spec.L_plus_1)
    throw std::invalid_argument("fit: layout and basis disagree");
  data.validate();
  const int p = data.p(), Lp1 = spec.L_plus_1;
  const DesignOperator op(data, spec);
  const Eigen::VectorXd& Y = data.Y;

  auto smooth = [&](const Eigen::MatrixXd& A, Eigen::VectorXd* resid = nullptr) {
    Eigen::VectorXd rsd = op.forward(A) - Y;
    double val = op.inv_n * rsd.squaredNorm();
    if (resid) *resid = std::move(rsd);
    return val;
  };
  auto objective = [&](const Eigen::MatrixXd& A) {
    return smooth(A) + delta * layout_block_norm(A, layout);
  };

  const double lip = power_iteration_lipschitz(op, Y, p, Lp1);
  double step = lip > 0.0 ? 1.0 / lip : 1.0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, Lp1);
  Eigen::MatrixXd Z = A;
  double tk = 1.0;

  FitResult result;
  result.delta_used = delta;
  double F = objective(A);
  result.objective_trace.push_back(F);

  // one backtracked proximal step from the given point
  auto prox_step = [&](const Eigen::MatrixXd& from) {
    Eigen::VectorXd resid;
    const double f_from = smooth(from, &resid);
    const Eigen::MatrixXd G = 2.0 * op.inv_n * op.adjoint(resid);
    for (;;) {
      Eigen::MatrixXd cand = composite_prox(from - step * G, layout, step * delta, radius);
      const Eigen::MatrixXd diff = cand - from;
      const double quad = f_from + G.cwiseProduct(diff).sum() +
                          diff.squaredNorm() / (2.0 * step);
      if (smooth(cand) <= quad + 1e-12 * std::abs(quad) + 1e-300 || step < 1e-290)
        return cand;
      step *= settings.step_backtrack_factor;
    }
  };

  const auto kkt_at = [&](const Eigen::MatrixXd& At) {
    Eigen::VectorXd resid;
    smooth(At, &resid);
    const Eigen::MatrixXd G = 2.0 * op.inv_n * op.adjoint(resid);
    return radius < std::numeric_limits<double>::infinity()
               ? kkt_constrained(G, At, layout, delta, radius)
               : kkt_from_gradient(G, At, layout, delta);
  };

  int stalls = 0;
  int it = 0;
  for (it = 1; it <= settings.max_iters; ++it) {
    Eigen::MatrixXd Anew = prox_step(Z);
    double Fnew = objective(Anew);
    if (settings.restart && Fnew > F) {
      // momentum overshoot: restart from the last accepted iterate
      Anew = prox_step(A);
      Fnew = objective(Anew);
      if (Fnew > F) {  // no progress at machine precision
        Anew = A;
        Fnew = F;
        ++stalls;
      } else {
        stalls = 0;
      }
      Z = Anew;
      tk = 1.0;
    } else {
      const double tnew = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      Z = Anew + ((tk - 1.0) / tnew) * (Anew - A);
      tk = tnew;
      stalls = 0;
    }
    const double rel_change = std::abs(F - Fnew) / std::max(1.0, std::abs(F));
    A = std::move(Anew);
    F = Fnew;
    result.objective_trace.push_back(F);

    const bool check = (it % 10 == 0) || rel_change < settings.rel_tol || stalls >= 3;
    if (check) {
      result.kkt_residual = kkt_at(A);
      const double tol = 10.0 * settings.rel_tol * (1.0 + A.norm());
      if (result.kkt_residual <= tol) {
        result.converged = true;
        break;
      }
      if (stalls >= 3) break;  // fixed point at machine precision
    }
  }
  result.iterations = std::min(it, settings.max_iters);
  if (!result.converged) result.kkt_residual = kkt_at(A);
  result.A_hat.entries = std::move(A);
  result.A_hat.layout = layout;
  return result;
}

}  // namespace

double delta_hat(const PenaltyConfig& cfg) {
  if (cfg.p < 2.0) throw std::invalid_argument("delta_hat: p < 2 (log p must be positive)");
  if (!(cfg.n > 0.0) || !(cfg.sigma >= 0.0) || !(cfg.h >= 0.0 && cfg.h < 1.0) ||
      !(cfg.mu >= 1.0) || !(cfg.phi_max > 0.0) || !(cfg.omega_max_1 > 0.0))
    throw std::invalid_argument("delta_hat: invalid penalty config");
  return 2.0 * (cfg.sigma * cfg.C_omega * cfg.K * std::sqrt(cfg.mu) + 1.0) *
         std::sqrt((1.0 + cfg.h) * cfg.phi_max * cfg.omega_max_1 * std::log(cfg.p) / cfg.n);
}

double estimate_omega_max_1(const Dataset& data) {
  data.validate();
  return (data.W.array().square().rowwise().sum() / data.n()).maxCoeff();
}

Eigen::VectorXd block_prox(const Eigen::VectorXd& v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("block_prox: tau < 0");
  const double nrm = v.norm();
  if (nrm <= tau) return Eigen::VectorXd::Zero(v.size());
  return v * (1.0 - tau / nrm);
}

double kkt_block_residual(const Dataset& data, const BasisSpec& spec,
                          const CoefficientMatrix& A, double delta) {
  const DesignOperator op(data, spec);
  const Eigen::VectorXd resid = op.forward(A.entries) - data.Y;
  const Eigen::MatrixXd G = 2.0 * op.inv_n * op.adjoint(resid);
  return kkt_from_gradient(G, A.entries, A.layout, delta);
}

FitResult fit(const Dataset& data, const BasisSpec& spec, const BlockLayout& layout,
              double delta, const SolverSettings& settings) {
  return run_fista(data, spec, layout, delta,
                   std::numeric_limits<double>::infinity(), settings);
}

FitResult fit_constrained(const Dataset& data, const BasisSpec& spec,
                          const BlockLayout& layout, double delta, double C_f,
                          const SolverSettings& settings) {
  if (!(C_f > 0.0)) throw std::invalid_argument("fit_constrained: C_f must be positive");
  const double radius = std::sqrt(static_cast<double>(data.p())) * C_f;
  return run_fista(data, spec, layout, delta, radius, settings);
}

}  // namespace vcm
