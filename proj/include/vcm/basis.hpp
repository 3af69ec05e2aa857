#pragma once

#include <Eigen/Core>
#include <vector>

namespace vcm {

enum class BasisKind { Fourier, PeriodicHaar };

// Orthonormal basis of L2([0,1]) with phi_0 == 1 and the uniform sum bound
// sum_{k<=l} phi_k(t)^2 <= c_phi^2 (l+1).
struct BasisSpec {
  BasisKind kind = BasisKind::Fourier;
  int L_plus_1 = 1;   // number of functions phi_0..phi_L
  double c_phi = 0.0; // constant of the sum bound
};

// Canonical specs: Fourier carries c_phi = sqrt(2), periodic Haar c_phi = 2.
BasisSpec make_basis(BasisKind kind, int L_plus_1);

// (phi_0(t),...,phi_L(t)); throws std::domain_error for t outside [0,1].
Eigen::VectorXd eval_basis(const BasisSpec& spec, double t);

// Columns are basis evaluations at the given points: (L+1) x n.
Eigen::MatrixXd eval_basis_matrix(const BasisSpec& spec,
                                  const std::vector<double>& times);

// Phi_hat = n^-1 sum_i phi(t_i) phi(t_i)^T
Eigen::MatrixXd gram_phi(const BasisSpec& spec,
                         const std::vector<double>& times);

struct SumBoundCheck {
  bool ok = false;
  double worst_ratio = 0.0; // max over grid and l of sum / (c_phi^2 (l+1))
};

SumBoundCheck check_sum_bound(const BasisSpec& spec, int grid_size);

}  // namespace vcm
