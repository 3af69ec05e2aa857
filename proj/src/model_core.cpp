#include "vcm/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vcm/rng.hpp"

namespace vcm {

CoefficientMatrix zero_coefficients(int p, const BlockLayout& layout) {
  CoefficientMatrix a;
  a.entries = Eigen::MatrixXd::Zero(p, layout.L_plus_1);
  a.layout = layout;
  return a;
}

double block_norm(const CoefficientMatrix& a) {
  double total = 0.0;
  for (const auto& blk : a.layout.blocks)
    for (int j = 0; j < a.p(); ++j)
      total += a.entries.row(j).segment(blk.start, blk.len).norm();
  return total;
}

Eigen::VectorXd reconstruct(const CoefficientMatrix& a, const BasisSpec& spec,
                            double t) {
  if (spec.L_plus_1 != a.cols())
    throw std::invalid_argument("reconstruct: basis size != coefficient columns");
  return a.entries * eval_basis(spec, t);
}

double l2_risk(const CoefficientMatrix& a_hat, const CoefficientMatrix& a_true) {
  if (a_hat.p() != a_true.p() || a_hat.cols() != a_true.cols())
    throw std::invalid_argument("l2_risk: dimension mismatch");
  return (a_hat.entries - a_true.entries).squaredNorm();
}

double tail_mass(const CoefficientMatrix& a, int from_col) {
  if (from_col >= a.cols()) return 0.0;
  return a.entries.rightCols(a.cols() - from_col).squaredNorm();
}

CoefficientMatrix truncate_columns(const CoefficientMatrix& a,
                                   const BlockLayout& layout) {
  if (layout.L_plus_1 > a.cols())
    throw std::invalid_argument("truncate_columns: target wider than source");
  CoefficientMatrix out;
  out.entries = a.entries.leftCols(layout.L_plus_1);
  out.layout = layout;
  return out;
}

void TruthSpec::validate() const {
  if (p < 1) throw std::invalid_argument("truth spec: p < 1");
  if (s() + s0() > p)
    throw std::invalid_argument("truth spec: s + s0 > p is infeasible");
  if (smoothness.size() != varying_indices.size())
    throw std::invalid_argument("truth spec: smoothness list must match varying indices");
  if (c_a <= 0) throw std::invalid_argument("truth spec: C_a must be positive");
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  for (int j : varying_indices) {
    if (j < 0 || j >= p || seen[j]) throw std::invalid_argument("truth spec: bad varying index");
    seen[j] = 1;
  }
  for (int j : constant_indices) {
    if (j < 0 || j >= p || seen[j]) throw std::invalid_argument("truth spec: bad constant index");
    seen[j] = 1;
  }
  for (const auto& sm : smoothness) {
    if (sm.nu < 1.0) throw std::invalid_argument("truth spec: nu < 1");
    if (sm.r <= std::min(0.5, 1.0 / sm.nu))
      throw std::invalid_argument("truth spec: r <= min(1/2, 1/nu)");
  }
}

CoefficientMatrix generate_truth(const TruthSpec& spec, const BlockLayout& layout,
                                 std::uint64_t seed) {
  spec.validate();
  const int cols = spec.L_gen > 0 ? spec.L_gen : 2 * layout.L_plus_1;
  CoefficientMatrix a = zero_coefficients(spec.p, BlockLayout::make(cols, layout.d));
  Rng rng(derive_seed(seed, 0x7472757468ULL));

  for (std::size_t v = 0; v < spec.varying_indices.size(); ++v) {
    const int j = spec.varying_indices[v];
    const double nu = spec.smoothness[v].nu;
    const double r = spec.smoothness[v].r;
    const double rp = r + 0.5 - 1.0 / nu;
    const double expo = rp + 1.0 / nu + kTruthDecayPad;
    double budget = 0.0;  // sum of profile^nu (k+1)^(nu r')
    for (int k = 0; k < cols; ++k)
      budget += std::pow(k + 1.0, -nu * expo + nu * rp);
    const double theta = rng.uniform(0.9, 1.0);
    const double c = spec.c_a * theta * std::pow(budget, -1.0 / nu);
    for (int k = 0; k < cols; ++k)
      a.entries(j, k) = rng.rademacher() * c * std::pow(k + 1.0, -expo);
  }
  for (int j : spec.constant_indices)
    a.entries(j, 0) = rng.uniform(spec.c_a / 2.0, spec.c_a);
  return a;
}

TruthReport validate_truth(const CoefficientMatrix& a, const TruthSpec& spec) {
  TruthReport rep;
  const int p = a.p();
  std::vector<char> is_varying(static_cast<std::size_t>(std::max(p, spec.p)), 0);
  std::vector<char> is_constant(is_varying.size(), 0);
  std::vector<int> smooth_slot(is_varying.size(), -1);
  for (std::size_t v = 0; v < spec.varying_indices.size(); ++v) {
    is_varying[spec.varying_indices[v]] = 1;
    smooth_slot[spec.varying_indices[v]] = static_cast<int>(v);
  }
  for (int j : spec.constant_indices) is_constant[j] = 1;

  rep.a3_ok = true;
  for (int j = 0; j < p; ++j) {
    RowReport row;
    row.j = j;
    const bool head_nonzero = a.entries(j, 0) != 0.0;
    const bool tail_nonzero =
        a.cols() > 1 && a.entries.row(j).tail(a.cols() - 1).cwiseAbs().maxCoeff() > 0.0;
    row.cls = tail_nonzero ? RowClass::Varying
                           : (head_nonzero ? RowClass::Constant : RowClass::Zero);
    if (is_varying[j]) {
      row.pattern_ok = row.cls == RowClass::Varying;
      const auto& sm = spec.smoothness[smooth_slot[j]];
      const double rp = sm.r + 0.5 - 1.0 / sm.nu;
      double budget = 0.0;
      for (int k = 0; k < a.cols(); ++k)
        budget += std::pow(std::abs(a.entries(j, k)), sm.nu) * std::pow(k + 1.0, sm.nu * rp);
      row.budget_usage = budget / std::pow(spec.c_a, sm.nu);
      row.a3_ok = row.budget_usage <= 1.0 + 1e-12;
    } else if (is_constant[j]) {
      row.pattern_ok = row.cls == RowClass::Constant;
      row.budget_usage = std::abs(a.entries(j, 0)) / spec.c_a;
      row.a3_ok = row.budget_usage <= 1.0 + 1e-12;
    } else {
      row.pattern_ok = row.cls == RowClass::Zero;
      row.a3_ok = true;
    }
    if (row.cls == RowClass::Varying) ++rep.n_varying;
    if (row.cls == RowClass::Constant) ++rep.n_constant;
    if (row.cls == RowClass::Zero) ++rep.n_zero;
    rep.a3_ok = rep.a3_ok && row.a3_ok;
    rep.rows.push_back(row);
  }
  rep.pattern_ok = rep.n_varying == spec.s() && rep.n_constant == spec.s0();
  for (const auto& row : rep.rows) rep.pattern_ok = rep.pattern_ok && row.pattern_ok;
  return rep;
}

}  // namespace vcm
