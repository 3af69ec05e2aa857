#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "vcm/basis.hpp"
#include "vcm/block_layout.hpp"

namespace vcm {

// Basis coefficients of the p component functions: entry (j,k) multiplies
// phi_k in the expansion of f_j.
struct CoefficientMatrix {
  Eigen::MatrixXd entries;  // p x (L+1)
  BlockLayout layout;

  int p() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

CoefficientMatrix zero_coefficients(int p, const BlockLayout& layout);

// sum_j sum_l ||a_{jl}||_2 over the block layout
double block_norm(const CoefficientMatrix& a);

// (f_1(t),...,f_p(t)) from the expansion; basis size must match columns.
Eigen::VectorXd reconstruct(const CoefficientMatrix& a, const BasisSpec& spec,
                            double t);

// Squared Frobenius distance; equals the squared L2 distance of the
// reconstructed vector functions (Parseval) when both live in the basis span.
double l2_risk(const CoefficientMatrix& a_hat, const CoefficientMatrix& a_true);

// Frobenius mass of columns from_col.. (risk carried by coefficients beyond
// an estimation basis of size from_col).
double tail_mass(const CoefficientMatrix& a, int from_col);

// Restriction to the first L_plus_1 columns under a new layout.
CoefficientMatrix truncate_columns(const CoefficientMatrix& a,
                                   const BlockLayout& layout);

struct SmoothnessSpec {
  double nu = 2.0;  // >= 1
  double r = 2.0;   // > min(1/2, 1/nu)

  bool operator==(const SmoothnessSpec&) const = default;
};

// Ground-truth sparsity and smoothness pattern: s time-varying rows with
// per-row (nu, r), s0 constant rows, the rest identically zero.
struct TruthSpec {
  int p = 1;
  std::vector<int> varying_indices;
  std::vector<int> constant_indices;
  std::vector<SmoothnessSpec> smoothness;  // parallel to varying_indices
  double c_a = 1.0;
  int L_gen = 0;  // columns of generated truth; 0 means 2*(L+1)

  int s() const { return static_cast<int>(varying_indices.size()); }
  int s0() const { return static_cast<int>(constant_indices.size()); }
  void validate() const;  // throws std::invalid_argument

  bool operator==(const TruthSpec&) const = default;
};

// Power-law truth: varying row j gets a_{jk} = sign_k * c_j * (k+1)^-(r'+1/nu+kappa_pad)
// with c_j set so the smoothness budget sum |a|^nu (k+1)^(nu r') lands in
// [0.9^nu, 1] * C_a^nu; constant rows draw a_{j0} uniform on [C_a/2, C_a].
CoefficientMatrix generate_truth(const TruthSpec& spec, const BlockLayout& layout,
                                 std::uint64_t seed);

enum class RowClass { Zero, Constant, Varying };

struct RowReport {
  int j = 0;
  RowClass cls = RowClass::Zero;
  double budget_usage = 0.0;  // budget / C_a^nu for varying rows
  bool a3_ok = true;
  bool pattern_ok = true;  // row class matches the spec's pattern
};

struct TruthReport {
  std::vector<RowReport> rows;
  int n_varying = 0;
  int n_constant = 0;
  int n_zero = 0;
  bool pattern_ok = false;
  bool a3_ok = false;
  bool ok() const { return pattern_ok && a3_ok; }
};

// Checks the smoothness budget per varying row and the sparsity pattern;
// reports, never throws.
TruthReport validate_truth(const CoefficientMatrix& a, const TruthSpec& spec);

constexpr double kTruthDecayPad = 0.01;

}  // namespace vcm
