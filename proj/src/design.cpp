#include "vcm/design.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vcm/parallel.hpp"
#include "vcm/rng.hpp"

namespace vcm {

void Dataset::validate() const {
  if (n() < 1) throw std::invalid_argument("dataset: n < 1");
  if (p() < 1) throw std::invalid_argument("dataset: p < 1");
  if (static_cast<int>(times.size()) != n() || W.cols() != n())
    throw std::invalid_argument("dataset: inconsistent sizes");
  if (!(sigma >= 0.0)) throw std::invalid_argument("dataset: sigma < 0");
  for (double t : times)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("dataset: time outside [0,1]");
  if (!W.allFinite() || !Y.allFinite())
    throw std::invalid_argument("dataset: non-finite entries");
}

DesignAssembly assemble_design(const Dataset& data, const BasisSpec& spec) {
  data.validate();
  const int n = data.n(), p = data.p(), Lp1 = spec.L_plus_1;
  DesignAssembly out;
  out.p = p;
  out.L_plus_1 = Lp1;
  out.B.resize(n, static_cast<Eigen::Index>(p) * Lp1);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd phi = eval_basis(spec, data.times[i]);
    for (int j = 0; j < p; ++j)
      out.B.row(i).segment(static_cast<Eigen::Index>(j) * Lp1, Lp1) =
          data.W(j, i) * phi.transpose();
  }
  return out;
}

GramEstimates gram(const Dataset& data, const BasisSpec& spec) {
  const DesignAssembly da = assemble_design(data, spec);
  GramEstimates g;
  g.Sigma_hat = (da.B.transpose() * da.B) / data.n();
  g.Sigma_hat = ((g.Sigma_hat + g.Sigma_hat.transpose()) / 2.0).eval();
  g.Omega_hat = (data.W * data.W.transpose()) / data.n();
  g.Phi_hat = gram_phi(spec, data.times);
  return g;
}

Eigen::MatrixXd gram_kron_sum(const Dataset& data, const BasisSpec& spec) {
  data.validate();
  const int n = data.n(), p = data.p(), Lp1 = spec.L_plus_1;
  const Eigen::Index P = static_cast<Eigen::Index>(p) * Lp1;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(P, P);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd phi = eval_basis(spec, data.times[i]);
    const Eigen::MatrixXd phi_outer = phi * phi.transpose();
    for (int j1 = 0; j1 < p; ++j1)
      for (int j2 = 0; j2 < p; ++j2)
        sigma.block(static_cast<Eigen::Index>(j1) * Lp1,
                    static_cast<Eigen::Index>(j2) * Lp1, Lp1, Lp1) +=
            data.W(j1, i) * data.W(j2, i) * phi_outer;
  }
  return sigma / n;
}

std::vector<SubsetEigs> restricted_eigs(const Dataset& data, const BasisSpec& spec,
                                        int aleph, int num_draws,
                                        std::uint64_t seed, int threads) {
  if (aleph < 1 || aleph > data.p())
    throw std::invalid_argument("restricted_eigs: aleph out of range");
  if (num_draws < 1) throw std::invalid_argument("restricted_eigs: num_draws < 1");
  const GramEstimates g = gram(data, spec);
  const int Lp1 = spec.L_plus_1;

  std::vector<SubsetEigs> out(static_cast<std::size_t>(num_draws));
  parallel_for(num_draws, threads, [&](int draw) {
    Rng rng(derive_seed(seed, 0x65696773ULL, static_cast<std::uint64_t>(draw)));
    SubsetEigs res;
    res.subset = rng.sample_without_replacement(data.p(), aleph);
    const Eigen::Index m = static_cast<Eigen::Index>(aleph) * Lp1;
    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < aleph; ++a)
      for (int b = 0; b < aleph; ++b)
        sub.block(static_cast<Eigen::Index>(a) * Lp1,
                  static_cast<Eigen::Index>(b) * Lp1, Lp1, Lp1) =
            g.Sigma_hat.block(static_cast<Eigen::Index>(res.subset[a]) * Lp1,
                              static_cast<Eigen::Index>(res.subset[b]) * Lp1, Lp1, Lp1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    res.lambda_min = es.eigenvalues().minCoeff();
    res.lambda_max = es.eigenvalues().maxCoeff();
    out[static_cast<std::size_t>(draw)] = std::move(res);
  });
  return out;
}

double cone_condition_probe(const Dataset& data, const BasisSpec& spec,
                            const BlockLayout& layout,
                            const std::vector<std::pair<int, int>>& support,
                            int num_probes, std::uint64_t seed) {
  if (support.empty()) throw std::invalid_argument("cone probe: empty support");
  if (num_probes < 1) throw std::invalid_argument("cone probe: num_probes < 1");
  const DesignAssembly da = assemble_design(data, spec);
  const int p = data.p(), Lp1 = layout.L_plus_1;
  if (Lp1 != spec.L_plus_1)
    throw std::invalid_argument("cone probe: layout and basis disagree");
  std::vector<std::vector<char>> on_support(
      static_cast<std::size_t>(p), std::vector<char>(layout.blocks.size(), 0));
  for (auto [j, l] : support) {
    if (j < 0 || j >= p || l < 0 || l >= layout.block_count())
      throw std::invalid_argument("cone probe: support index out of range");
    on_support[j][l] = 1;
  }

  Rng rng(derive_seed(seed, 0x636f6e65ULL));
  double min_ratio = std::numeric_limits<double>::infinity();
  Eigen::VectorXd v(static_cast<Eigen::Index>(p) * Lp1);
  for (int probe = 0; probe < num_probes; ++probe) {
    v.setZero();
    double support_sum = 0.0, off_sum = 0.0;
    for (int j = 0; j < p; ++j)
      for (std::size_t l = 0; l < layout.blocks.size(); ++l) {
        const auto& blk = layout.blocks[l];
        Eigen::VectorXd g(blk.len);
        for (int k = 0; k < blk.len; ++k) g(k) = rng.normal();
        v.segment(static_cast<Eigen::Index>(j) * Lp1 + blk.start, blk.len) = g;
        (on_support[j][l] ? support_sum : off_sum) += g.norm();
      }
    // rescale off-support blocks onto the cone boundary
    const double target = 3.0 * support_sum;
    const double scale = off_sum > 0.0 ? target / off_sum : 0.0;
    for (int j = 0; j < p; ++j)
      for (std::size_t l = 0; l < layout.blocks.size(); ++l)
        if (!on_support[j][l]) {
          const auto& blk = layout.blocks[l];
          v.segment(static_cast<Eigen::Index>(j) * Lp1 + blk.start, blk.len) *= scale;
        }
    const double denom = v.squaredNorm();
    if (denom == 0.0) continue;
    const double ratio = (da.B * v).squaredNorm() / (data.n() * denom);
    min_ratio = std::min(min_ratio, ratio);
  }
  return min_ratio;
}

}  // namespace vcm
