#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "vcm/design.hpp"
#include "vcm/rng.hpp"
#include "vcm/synth.hpp"

using namespace vcm;

namespace {

Dataset random_dataset(DictionaryKind kind, int p, int n, std::uint64_t seed) {
  Dataset data;
  data.W = sample_dictionary({kind, p}, n, seed);
  Rng rng(derive_seed(seed, 99));
  data.times.resize(static_cast<std::size_t>(n));
  for (auto& t : data.times) t = rng.uniform();
  data.Y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) data.Y(i) = rng.normal();
  data.sigma = 1.0;
  return data;
}

}  // namespace

TEST_CASE("design with the trivial basis is the W matrix") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 1, 12, 5);
  const DesignAssembly da = assemble_design(data, make_basis(BasisKind::Fourier, 1));
  REQUIRE(da.B.cols() == 1);
  for (int i = 0; i < 12; ++i) CHECK(da.B(i, 0) == data.W(0, i));
}

TEST_CASE("single row is the flattened outer product in (j,k) order") {
  Dataset data;
  data.W.resize(2, 1);
  data.W << 3.0, -2.0;
  data.times = {0.2};
  data.Y = Eigen::VectorXd::Zero(1);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 2);
  const Eigen::VectorXd phi = eval_basis(spec, 0.2);
  const DesignAssembly da = assemble_design(data, spec);
  REQUIRE(da.B.cols() == 4);
  // column (j,k) = j*(L+1)+k: (w1, x w1, w2, x w2) with x = phi_1
  CHECK(da.B(0, 0) == doctest::Approx(3.0 * phi(0)));
  CHECK(da.B(0, 1) == doctest::Approx(3.0 * phi(1)));
  CHECK(da.B(0, 2) == doctest::Approx(-2.0 * phi(0)));
  CHECK(da.B(0, 3) == doctest::Approx(-2.0 * phi(1)));
}

TEST_CASE("empty dataset is an argument error") {
  Dataset data;
  data.W.resize(2, 0);
  data.Y.resize(0);
  CHECK_THROWS_AS(assemble_design(data, make_basis(BasisKind::Fourier, 2)),
                  std::invalid_argument);
}

TEST_CASE("Kronecker identity: B^T B equals the sum of Omega_i (x) Phi_i") {
  int instance = 0;
  for (DictionaryKind kind : {DictionaryKind::Gaussian, DictionaryKind::SymmetricBernoulli,
                              DictionaryKind::OrthonormalCanonical}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      Rng rng(derive_seed(seed, 1234, static_cast<std::uint64_t>(kind)));
      const int n = 2 + static_cast<int>(rng.uniform_int(49));
      const int p = 1 + static_cast<int>(rng.uniform_int(5));
      const int Lp1 = 1 + static_cast<int>(rng.uniform_int(7));
      Dataset data = random_dataset(kind, p, n, seed * 31 + instance++);
      const BasisSpec spec = make_basis(
          seed % 2 == 0 ? BasisKind::Fourier : BasisKind::PeriodicHaar, Lp1);
      const DesignAssembly da = assemble_design(data, spec);
      const Eigen::MatrixXd direct = da.B.transpose() * da.B;
      const Eigen::MatrixXd kron = gram_kron_sum(data, spec) * data.n();
      CHECK((direct - kron).norm() <= 1e-12 * direct.norm());
    }
  }
}

TEST_CASE("gram estimates are consistent and PSD") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 3, 40, 17);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 4);
  const GramEstimates g = gram(data, spec);

  CHECK((g.Sigma_hat - g.Sigma_hat.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.Sigma_hat, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * g.Sigma_hat.norm());

  // scalar case: Sigma_hat = n^-1 sum W_i^2
  Dataset scalar = random_dataset(DictionaryKind::Gaussian, 1, 25, 3);
  const GramEstimates gs = gram(scalar, make_basis(BasisKind::Fourier, 1));
  CHECK(gs.Sigma_hat(0, 0) ==
        doctest::Approx(scalar.W.row(0).squaredNorm() / scalar.n()));
}

TEST_CASE("large-sample gram of the Gaussian dictionary approaches identity") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 4, 60000, 23);
  const GramEstimates g = gram(data, make_basis(BasisKind::Fourier, 3));
  CHECK((g.Sigma_hat - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 0.08);
  CHECK((g.Omega_hat - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("restricted eigenvalues: full subset reproduces the spectrum") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 3, 30, 7);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 3);
  const GramEstimates g = gram(data, spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.Sigma_hat, Eigen::EigenvaluesOnly);

  const auto eigs = restricted_eigs(data, spec, 3, 5, 99);
  for (const auto& e : eigs) {
    CHECK(e.lambda_min == doctest::Approx(es.eigenvalues().minCoeff()));
    CHECK(e.lambda_max == doctest::Approx(es.eigenvalues().maxCoeff()));
  }

  // scalar design: both extremes equal n^-1 sum W_i^2
  Dataset scalar = random_dataset(DictionaryKind::Gaussian, 1, 20, 8);
  const auto se = restricted_eigs(scalar, make_basis(BasisKind::Fourier, 1), 1, 3, 5);
  const double expect = scalar.W.row(0).squaredNorm() / scalar.n();
  for (const auto& e : se) {
    CHECK(e.lambda_min == doctest::Approx(expect));
    CHECK(e.lambda_max == doctest::Approx(expect));
  }
}

TEST_CASE("restricted eigenvalues interlace the full spectrum") {
  Dataset data = random_dataset(DictionaryKind::SymmetricBernoulli, 6, 50, 29);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 3);
  const GramEstimates g = gram(data, spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.Sigma_hat, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  for (const auto& e : restricted_eigs(data, spec, 3, 25, 101)) {
    CHECK(e.lambda_min >= lmin - 1e-12);
    CHECK(e.lambda_max <= lmax + 1e-12);
  }
  CHECK_THROWS_AS(restricted_eigs(data, spec, 7, 2, 1), std::invalid_argument);
}

TEST_CASE("restricted eigenvalues are deterministic across thread counts") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 8, 60, 3);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 2);
  const auto seq = restricted_eigs(data, spec, 3, 16, 77, 1);
  const auto par = restricted_eigs(data, spec, 3, 16, 77, 4);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].subset == par[i].subset);
    CHECK(seq[i].lambda_min == par[i].lambda_min);
    CHECK(seq[i].lambda_max == par[i].lambda_max);
  }
}

TEST_CASE("cone probe: near-isometric design gives ratios near one") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 3, 20000, 11);
  const BasisSpec spec = make_basis(BasisKind::Fourier, 3);
  const BlockLayout layout = BlockLayout::make(3, 2);
  const double ratio = cone_condition_probe(data, spec, layout, {{0, 0}, {1, 1}}, 50, 13);
  CHECK(ratio > 0.5);
  CHECK(ratio < 1.5);
}

TEST_CASE("cone probe: zero design gives ratio zero, empty support throws") {
  Dataset data = random_dataset(DictionaryKind::Gaussian, 2, 15, 21);
  data.W.setZero();
  data.Y.setZero();
  const BasisSpec spec = make_basis(BasisKind::Fourier, 2);
  const BlockLayout layout = BlockLayout::make(2, 1);
  CHECK(cone_condition_probe(data, spec, layout, {{0, 0}}, 10, 3) == 0.0);
  CHECK_THROWS_AS(cone_condition_probe(data, spec, layout, {}, 10, 3),
                  std::invalid_argument);
}
