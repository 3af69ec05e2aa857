#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "vcm/basis.hpp"
#include "vcm/block_layout.hpp"

namespace vcm {

// n observations (W_i, t_i, Y_i) with known noise level sigma.
struct Dataset {
  Eigen::MatrixXd W;          // p x n, columns W_i
  std::vector<double> times;  // n, in [0,1]
  Eigen::VectorXd Y;          // n
  double sigma = 0.0;

  int n() const { return static_cast<int>(Y.size()); }
  int p() const { return static_cast<int>(W.rows()); }
  void validate() const;  // throws std::invalid_argument on bad invariants
};

// Row i of B is vec(phi(t_i) W_i^T); column (j,k) sits at j*(L+1)+k, i.e.
// the basis index runs fastest within each covariate.
struct DesignAssembly {
  Eigen::MatrixXd B;  // n x p(L+1)
  int p = 0;
  int L_plus_1 = 0;
};

DesignAssembly assemble_design(const Dataset& data, const BasisSpec& spec);

struct GramEstimates {
  Eigen::MatrixXd Sigma_hat;  // p(L+1) x p(L+1), = n^-1 B^T B
  Eigen::MatrixXd Omega_hat;  // p x p, = n^-1 sum W_i W_i^T
  Eigen::MatrixXd Phi_hat;    // (L+1) x (L+1)
};

GramEstimates gram(const Dataset& data, const BasisSpec& spec);

// Independent route to the same matrix: n^-1 sum_i Omega_i (x) Phi_i.
Eigen::MatrixXd gram_kron_sum(const Dataset& data, const BasisSpec& spec);

struct SubsetEigs {
  std::vector<int> subset;  // covariate indices, sorted
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

// Extreme eigenvalues of Sigma_hat restricted to random covariate subsets of
// size aleph (all basis indices kept). Deterministic given seed.
std::vector<SubsetEigs> restricted_eigs(const Dataset& data, const BasisSpec& spec,
                                        int aleph, int num_draws,
                                        std::uint64_t seed, int threads = 1);

// Randomized diagnostic for the compatibility cone
// { v : sum_{off-support blocks} ||v_jl|| <= 3 sum_{support} ||v_jl|| }:
// samples cone members and reports the minimum of ||Bv||^2 / (n ||v||^2).
// Not a certified minimum.
double cone_condition_probe(const Dataset& data, const BasisSpec& spec,
                            const BlockLayout& layout,
                            const std::vector<std::pair<int, int>>& support,
                            int num_probes, std::uint64_t seed);

}  // namespace vcm
