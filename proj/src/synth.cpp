#include "vcm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vcm/rng.hpp"

namespace vcm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Inverse CDF of g(t) = 1 + tilt*cos(2*pi*t) by Newton with bisection guard.
double sample_tilted_time(double u, double tilt) {
  if (tilt == 0.0) return u;
  double lo = 0.0, hi = 1.0, t = u;
  for (int it = 0; it < 60; ++it) {
    const double cdf = t + tilt * std::sin(kTwoPi * t) / kTwoPi;
    const double err = cdf - u;
    if (std::abs(err) < 1e-14) break;
    if (err > 0)
      hi = t;
    else
      lo = t;
    const double deriv = 1.0 + tilt * std::cos(kTwoPi * t);
    double next = t - err / deriv;
    t = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  return t;
}

}  // namespace

Eigen::MatrixXd sample_dictionary(const DictionarySpec& spec, int n,
                                  std::uint64_t seed) {
  if (spec.p < 1) throw std::invalid_argument("dictionary: p < 1");
  if (n < 1) throw std::invalid_argument("dictionary: n < 1");
  Rng rng(derive_seed(seed, 0x64696374ULL));
  Eigen::MatrixXd W(spec.p, n);
  switch (spec.kind) {
    case DictionaryKind::Gaussian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < spec.p; ++j) W(j, i) = rng.normal();
      break;
    case DictionaryKind::SymmetricBernoulli:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < spec.p; ++j) W(j, i) = rng.rademacher();
      break;
    case DictionaryKind::OrthonormalCanonical:
      W.setZero();
      for (int i = 0; i < n; ++i)
        W(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(spec.p))), i) = 1.0;
      break;
  }
  return W;
}

RicConstants theoretical_ric(const DictionarySpec& spec, int aleph, double mu,
                             double log_p) {
  RicConstants c;
  switch (spec.kind) {
    case DictionaryKind::Gaussian: {
      c.omega_min = c.omega_max = 1.0;
      c.C_mu = std::sqrt(2.0 * log_p);
      const double u = std::sqrt(static_cast<double>(aleph)) + 2.0 * std::sqrt(mu * log_p);
      c.U_mu_sq = u * u;
      break;
    }
    case DictionaryKind::SymmetricBernoulli:
      c.omega_min = c.omega_max = 1.0;
      c.C_mu = 1.0;
      c.U_mu_sq = static_cast<double>(aleph);
      break;
    case DictionaryKind::OrthonormalCanonical:
      c.omega_min = c.omega_max = 1.0 / spec.p;
      c.C_mu = 1.0;
      c.U_mu_sq = 1.0;
      break;
    default:
      throw std::invalid_argument("theoretical_ric: unsupported dictionary kind");
  }
  return c;
}

double sample_noise(NoiseKind kind, Rng& rng) {
  return kind == NoiseKind::Gaussian ? rng.normal() : rng.rademacher();
}

Dataset generate_dataset(const CoefficientMatrix& truth, const DictionarySpec& dict,
                         const NoiseSpec& noise, double sigma, int n,
                         std::uint64_t seed, const TimeDensity& density) {
  if (truth.p() != dict.p)
    throw std::invalid_argument("generate_dataset: truth rows != dictionary p");
  if (!(sigma >= 0.0)) throw std::invalid_argument("generate_dataset: sigma < 0");
  if (std::abs(density.tilt) >= 1.0)
    throw std::invalid_argument("generate_dataset: |tilt| must be < 1");

  Dataset data;
  data.sigma = sigma;
  data.W = sample_dictionary(dict, n, derive_seed(seed, 1));

  Rng rng_t(derive_seed(seed, 2));
  data.times.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    data.times[i] = sample_tilted_time(rng_t.uniform(), density.tilt);

  // full-expansion evaluation, so truths wider than any estimation basis
  // contribute their remainder to Y
  const BasisSpec full = make_basis(BasisKind::Fourier, truth.cols());
  Rng rng_xi(derive_seed(seed, 3));
  data.Y.resize(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd f = reconstruct(truth, full, data.times[i]);
    data.Y(i) = data.W.col(i).dot(f) + sigma * sample_noise(noise.kind, rng_xi);
  }
  return data;
}

CoefficientMatrix TestFunctionFamily::member(int idx) const {
  if (idx < 0 || idx >= static_cast<int>(omegas.size()))
    throw std::invalid_argument("test family: member index out of range");
  const auto& w = omegas[static_cast<std::size_t>(idx)];
  CoefficientMatrix a = zero_coefficients(p, BlockLayout::make(n_cols, 1));
  int bit = 0;
  for (int k : K1) a.entries(k, 0) = w[bit++] ? u : 0.0;
  for (std::size_t kk = 0; kk < K0.size(); ++kk) {
    const int row = K0[kk];
    for (int l = l0[kk]; l < 2 * l0[kk]; ++l)
      a.entries(row, l) = w[bit++] ? v : 0.0;
  }
  return a;
}

double TestFunctionFamily::sq_distance(int i, int j) const {
  const auto& wi = omegas[static_cast<std::size_t>(i)];
  const auto& wj = omegas[static_cast<std::size_t>(j)];
  int bit = 0;
  double d2 = 0.0;
  for (std::size_t k = 0; k < K1.size(); ++k, ++bit)
    d2 += u * u * std::abs(static_cast<int>(wi[bit]) - static_cast<int>(wj[bit]));
  for (std::size_t kk = 0; kk < K0.size(); ++kk)
    for (int l = l0[kk]; l < 2 * l0[kk]; ++l, ++bit)
      d2 += v * v * std::abs(static_cast<int>(wi[bit]) - static_cast<int>(wj[bit]));
  return d2;
}

TestFunctionFamily build_test_family(int s, int s0, double n,
                                     const std::vector<double>& r, double c_a,
                                     double sigma, double kappa,
                                     double omega_max_s, double phi_max,
                                     int num_members, std::uint64_t seed, int p) {
  if (s < 1) throw std::invalid_argument("test family: s >= 1 required");
  if (!(kappa > 0.0 && kappa < 0.125))
    throw std::invalid_argument("test family: kappa must lie in (0, 1/8)");
  if (static_cast<int>(r.size()) != s)
    throw std::invalid_argument("test family: need one smoothness r per varying row");
  if (num_members < 2) throw std::invalid_argument("test family: need >= 2 members");

  double r_max = 0.0;
  for (double rv : r) r_max = std::max(r_max, rv);
  const double n_low = 2.0 * sigma * sigma * kappa / (c_a * c_a * omega_max_s * phi_max) *
                       std::max(1.0, std::pow(6.0 / s, 2.0 * r_max + 1.0));
  if (n < n_low)
    throw std::invalid_argument("test family: n < n_low = " + std::to_string(n_low));

  TestFunctionFamily fam;
  fam.p = p > 0 ? p : s + s0;
  if (fam.p < s + s0) throw std::invalid_argument("test family: p < s + s0");
  for (int k = 0; k < s0; ++k) fam.K1.push_back(k);
  for (int k = 0; k < s; ++k) fam.K0.push_back(s0 + k);

  // Case 1 amplitude for the constant rows
  fam.u = std::sqrt(2.0 * sigma * sigma * kappa / (n * omega_max_s * phi_max));

  // Case 2: l0k per varying row. v = C_a (2 l0k)^-(r_k + 1/2) is constant
  // across k up to the integer rounding of l0k; the minimum keeps both the
  // smoothness budget and the KL condition valid for every row.
  const double base = 4.0 * c_a * c_a * n * omega_max_s * phi_max / (sigma * sigma * kappa);
  fam.v = std::numeric_limits<double>::infinity();
  for (double rk : r) {
    const int l0k =
        static_cast<int>(std::floor(0.5 * std::pow(base, 1.0 / (2.0 * rk + 1.0)))) + 1;
    fam.l0.push_back(l0k);
    fam.v = std::min(fam.v, c_a * std::pow(2.0 * l0k, -(rk + 0.5)));
  }

  fam.bits = s0;
  fam.n_cols = 1;
  for (int l0k : fam.l0) {
    fam.bits += l0k;
    fam.n_cols = std::max(fam.n_cols, 2 * l0k);
  }
  fam.min_distance = (fam.bits + 7) / 8;

  // greedy Varshamov-Gilbert packing, seeded with the all-zero word
  Rng rng(derive_seed(seed, 0x7061636bULL));
  fam.omegas.push_back(std::vector<std::uint8_t>(static_cast<std::size_t>(fam.bits), 0));
  const long max_attempts = 20000L * num_members;
  for (long attempt = 0; attempt < max_attempts &&
                         static_cast<int>(fam.omegas.size()) < num_members;
       ++attempt) {
    std::vector<std::uint8_t> cand(static_cast<std::size_t>(fam.bits));
    for (auto& b : cand) b = static_cast<std::uint8_t>(rng.uniform_int(2));
    bool far = true;
    for (const auto& w : fam.omegas) {
      int dist = 0;
      for (int b = 0; b < fam.bits; ++b) dist += cand[b] != w[b];
      if (dist < fam.min_distance) {
        far = false;
        break;
      }
    }
    if (far) fam.omegas.push_back(std::move(cand));
  }
  if (static_cast<int>(fam.omegas.size()) < num_members)
    throw std::runtime_error("test family: greedy packing stalled");
  return fam;
}

}  // namespace vcm
