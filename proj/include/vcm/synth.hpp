#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "vcm/design.hpp"
#include "vcm/model_core.hpp"

namespace vcm {

enum class DictionaryKind { Gaussian, SymmetricBernoulli, OrthonormalCanonical };

struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::Gaussian;
  int p = 1;

  bool operator==(const DictionarySpec&) const = default;
};

enum class NoiseKind { Gaussian, Rademacher };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double K = 1.0;  // sub-Gaussian norm bound carried into the penalty

  bool operator==(const NoiseSpec&) const = default;
};

// p x n matrix of predictor columns W_i.
Eigen::MatrixXd sample_dictionary(const DictionarySpec& spec, int n,
                                  std::uint64_t seed);

// Closed-form restricted-isometry constants for the three dictionary kinds.
struct RicConstants {
  double omega_min = 1.0;
  double omega_max = 1.0;
  double C_mu = 1.0;
  double U_mu_sq = 1.0;
};

RicConstants theoretical_ric(const DictionarySpec& spec, int aleph, double mu,
                             double log_p);

// Sampling density g(t) proportional to 1 + tilt*cos(2*pi*t); tilt = 0 is the
// uniform default with phi_min = phi_max = 1.
struct TimeDensity {
  double tilt = 0.0;  // |tilt| < 1 keeps g bounded away from 0
};

// Observations Y_i = W_i^T f(t_i) + sigma xi_i with f evaluated from the full
// truth expansion (columns beyond an estimation basis realize the remainder).
Dataset generate_dataset(const CoefficientMatrix& truth, const DictionarySpec& dict,
                         const NoiseSpec& noise, double sigma, int n,
                         std::uint64_t seed, const TimeDensity& density = {});

double sample_noise(NoiseKind kind, class Rng& rng);

// Lower-bound test functions f_{k,w}(t) = w_{k0} u_k + sum_{l=l0k}^{2 l0k - 1}
// w_{kl} v_k phi_l(t), indexed by binary sequences from a greedy
// Varshamov-Gilbert packing. Constant rows live on K1, varying rows on K0.
struct TestFunctionFamily {
  double u = 0.0;
  double v = 0.0;
  std::vector<int> l0;  // per k in K0
  std::vector<int> K1;  // covariate rows carrying the constant bump u
  std::vector<int> K0;  // covariate rows carrying the varying packet v
  int p = 0;
  int n_cols = 0;  // columns needed by the widest member (max 2*l0k)
  int bits = 0;    // packing word length = |K1| + sum l0
  int min_distance = 0;  // ceil(bits/8)
  std::vector<std::vector<std::uint8_t>> omegas;

  CoefficientMatrix member(int idx) const;
  // Squared L2 distance D^2 between members (coefficient-space evaluation).
  double sq_distance(int i, int j) const;
};

// kappa < 1/8, s >= 1; throws std::invalid_argument naming n_low when n is
// infeasible. num_members caps the greedy packing size.
TestFunctionFamily build_test_family(int s, int s0, double n,
                                     const std::vector<double>& r, double c_a,
                                     double sigma, double kappa,
                                     double omega_max_s, double phi_max,
                                     int num_members, std::uint64_t seed,
                                     int p = 0);

}  // namespace vcm
