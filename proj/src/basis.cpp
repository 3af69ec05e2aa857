#include "vcm/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace vcm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Haar mother wavelet: 1 on [0,1/2), -1 on [1/2,1), 0 elsewhere.
double haar_mother(double x) {
  if (x < 0.0 || x >= 1.0) return 0.0;
  return x < 0.5 ? 1.0 : -1.0;
}

// phi_j = psi_{h,i} with h = floor(log2 j), i = j - 2^h, j >= 1
double haar_eval(int j, double t) {
  int h = 0;
  while ((2 << h) <= j) ++h;  // 2^h <= j < 2^(h+1)
  int i = j - (1 << h);
  double scale = std::pow(2.0, 0.5 * h);
  return scale * haar_mother(std::ldexp(t, h) - i);
}

}  // namespace

BasisSpec make_basis(BasisKind kind, int L_plus_1) {
  if (L_plus_1 < 1) throw std::invalid_argument("basis size must be >= 1");
  BasisSpec spec;
  spec.kind = kind;
  spec.L_plus_1 = L_plus_1;
  spec.c_phi = (kind == BasisKind::Fourier) ? std::sqrt(2.0) : 2.0;
  return spec;
}

Eigen::VectorXd eval_basis(const BasisSpec& spec, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("basis evaluation point outside [0,1]");
  Eigen::VectorXd out(spec.L_plus_1);
  out(0) = 1.0;
  if (spec.kind == BasisKind::Fourier) {
    const double root2 = std::sqrt(2.0);
    for (int j = 1; j < spec.L_plus_1; ++j) {
      int m = (j + 1) / 2;
      double arg = kTwoPi * m * t;
      out(j) = (j % 2 == 1) ? root2 * std::sin(arg) : root2 * std::cos(arg);
    }
  } else {
    for (int j = 1; j < spec.L_plus_1; ++j) out(j) = haar_eval(j, t);
  }
  return out;
}

Eigen::MatrixXd eval_basis_matrix(const BasisSpec& spec,
                                  const std::vector<double>& times) {
  Eigen::MatrixXd out(spec.L_plus_1, static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = eval_basis(spec, times[i]);
  return out;
}

Eigen::MatrixXd gram_phi(const BasisSpec& spec,
                         const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("gram_phi: empty sample");
  const Eigen::MatrixXd phi = eval_basis_matrix(spec, times);
  Eigen::MatrixXd g = (phi * phi.transpose()) / static_cast<double>(times.size());
  return (g + g.transpose()) / 2.0;  // enforce exact symmetry
}

SumBoundCheck check_sum_bound(const BasisSpec& spec, int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("check_sum_bound: grid_size < 2");
  SumBoundCheck res;
  const double c2 = spec.c_phi * spec.c_phi;
  for (int g = 0; g < grid_size; ++g) {
    double t = (g + 0.5) / grid_size;
    Eigen::VectorXd phi = eval_basis(spec, t);
    double run = 0.0;
    for (int l = 0; l < spec.L_plus_1; ++l) {
      run += phi(l) * phi(l);
      double ratio = run / (c2 * (l + 1));
      if (ratio > res.worst_ratio) res.worst_ratio = ratio;
    }
  }
  res.ok = res.worst_ratio <= 1.0 + 1e-12;
  return res;
}

}  // namespace vcm
