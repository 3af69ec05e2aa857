#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vcm/model_core.hpp"
#include "vcm/rng.hpp"

using namespace vcm;

namespace {

CoefficientMatrix random_coeffs(int p, const BlockLayout& layout, std::uint64_t seed) {
  CoefficientMatrix a = zero_coefficients(p, layout);
  Rng rng(seed);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < layout.L_plus_1; ++k) a.entries(j, k) = rng.normal();
  return a;
}

TruthSpec simple_truth(int p, int s, int s0, double nu, double r, double c_a) {
  TruthSpec spec;
  spec.p = p;
  spec.c_a = c_a;
  for (int j = 0; j < s; ++j) {
    spec.varying_indices.push_back(j);
    spec.smoothness.push_back({nu, r});
  }
  for (int j = 0; j < s0; ++j) spec.constant_indices.push_back(s + j);
  return spec;
}

}  // namespace

TEST_CASE("block layout invariants") {
  const BlockLayout layout = BlockLayout::make(12, 4);
  REQUIRE(layout.blocks.size() == 4);  // {0}, 3 blocks over 11 remaining columns
  CHECK(layout.blocks[0].start == 0);
  CHECK(layout.blocks[0].len == 1);
  CHECK(layout.blocks[1].len == 4);
  CHECK(layout.blocks[2].len == 4);
  CHECK(layout.blocks[3].len == 3);  // short last block
  int covered = 0;
  for (const auto& blk : layout.blocks) covered += blk.len;
  CHECK(covered == 12);

  // d = max(1, floor(ln n))
  CHECK(BlockLayout::for_sample_size(8, 1024).d == 6);
  CHECK(BlockLayout::for_sample_size(8, 2).d == 1);
}

TEST_CASE("block norm hand example") {
  // p=1, scalar group 3, one block (3,4), rest zero: 3 + 5 = 8
  const BlockLayout layout = BlockLayout::make(4, 2);
  CoefficientMatrix a = zero_coefficients(1, layout);
  a.entries(0, 0) = 3.0;
  a.entries(0, 1) = 3.0;
  a.entries(0, 2) = 4.0;
  CHECK(block_norm(a) == doctest::Approx(8.0));
  CHECK(block_norm(zero_coefficients(3, layout)) == 0.0);
}

TEST_CASE("block norm is positively homogeneous and subadditive") {
  const BlockLayout layout = BlockLayout::make(7, 3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CoefficientMatrix a = random_coeffs(2, layout, seed);
    CoefficientMatrix b = random_coeffs(2, layout, seed + 1000);
    Rng rng(seed + 2000);
    const double c = 3.0 * rng.uniform();
    CoefficientMatrix scaled = a;
    scaled.entries *= c;
    CHECK(block_norm(scaled) == doctest::Approx(c * block_norm(a)));
    CoefficientMatrix sum = a;
    sum.entries += b.entries;
    CHECK(block_norm(sum) <= block_norm(a) + block_norm(b) + 1e-12);
  }
}

TEST_CASE("reconstruction examples") {
  const BasisSpec spec = make_basis(BasisKind::Fourier, 4);
  const BlockLayout layout = BlockLayout::make(4, 2);

  CHECK(reconstruct(zero_coefficients(3, layout), spec, 0.5).cwiseAbs().maxCoeff() == 0.0);

  CoefficientMatrix constant = zero_coefficients(2, layout);
  constant.entries(1, 0) = 2.5;
  for (double t : {0.0, 0.31, 0.99}) {
    const Eigen::VectorXd f = reconstruct(constant, spec, t);
    CHECK(f(0) == 0.0);
    CHECK(f(1) == doctest::Approx(2.5));
  }

  // single coefficient a_{1,1}=1 gives f_1(t) = sqrt(2) sin(2 pi t)
  CoefficientMatrix single = zero_coefficients(1, layout);
  single.entries(0, 1) = 1.0;
  CHECK(reconstruct(single, spec, 0.25)(0) == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(reconstruct(single, make_basis(BasisKind::Fourier, 5), 0.5),
                  std::invalid_argument);
}

TEST_CASE("l2 risk examples") {
  const BlockLayout layout = BlockLayout::make(5, 2);
  CoefficientMatrix a = random_coeffs(3, layout, 42);
  CHECK(l2_risk(a, a) == 0.0);

  CoefficientMatrix b = a;
  b.entries(0, 1) += 1.0;
  b.entries(2, 4) -= 1.0;
  CHECK(l2_risk(a, b) == doctest::Approx(2.0));

  CoefficientMatrix c = zero_coefficients(3, BlockLayout::make(4, 2));
  CHECK_THROWS_AS(l2_risk(a, c), std::invalid_argument);
}

TEST_CASE("risk equals quadrature risk via Parseval") {
  const int L_plus_1 = 6;
  const BasisSpec spec = make_basis(BasisKind::Fourier, L_plus_1);
  const BlockLayout layout = BlockLayout::make(L_plus_1, 2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CoefficientMatrix a = random_coeffs(2, layout, seed);
    const CoefficientMatrix b = random_coeffs(2, layout, seed + 77);
    const double quad = oracles::quadrature(
        [&](double t) {
          return (reconstruct(a, spec, t) - reconstruct(b, spec, t)).squaredNorm();
        },
        100000);
    CHECK(l2_risk(a, b) == doctest::Approx(quad).epsilon(1e-3));
  }
}

TEST_CASE("generate_truth: empty pattern gives the zero matrix") {
  const BlockLayout layout = BlockLayout::make(6, 2);
  const CoefficientMatrix a = generate_truth(simple_truth(4, 0, 0, 2, 2, 1), layout, 3);
  CHECK(a.entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generate_truth saturates the smoothness budget") {
  // nu=2, r=2: the budget multiplier theta^2 lands in [0.81, 1.0]
  const BlockLayout layout = BlockLayout::make(8, 2);
  const TruthSpec spec = simple_truth(1, 1, 0, 2, 2, 1);
  const CoefficientMatrix a = generate_truth(spec, layout, 7);
  const double rp = 2.0;  // r + 1/2 - 1/nu
  double budget = 0.0;
  for (int k = 0; k < a.cols(); ++k)
    budget += a.entries(0, k) * a.entries(0, k) * std::pow(k + 1.0, 2.0 * rp);
  CHECK(budget >= 0.81);
  CHECK(budget <= 1.0);
}

TEST_CASE("generate_truth rejects infeasible patterns") {
  CHECK_THROWS_AS(generate_truth(simple_truth(2, 2, 1, 2, 2, 1),
                                 BlockLayout::make(4, 2), 1),
                  std::invalid_argument);
}

TEST_CASE("generator output passes validation across seeds") {
  const BlockLayout layout = BlockLayout::make(10, 3);
  const TruthSpec spec = simple_truth(6, 2, 2, 1.5, 2, 1.3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CoefficientMatrix a = generate_truth(spec, layout, seed);
    const TruthReport rep = validate_truth(a, spec);
    CHECK(rep.ok());
    CHECK(rep.n_varying == 2);
    CHECK(rep.n_constant == 2);
    CHECK(rep.n_zero == 2);
  }
}

TEST_CASE("validation flags violations and pattern mismatches") {
  const BlockLayout layout = BlockLayout::make(6, 2);
  const TruthSpec spec = simple_truth(3, 1, 1, 2, 2, 1);

  // a row at the constant C_a everywhere has a divergent budget
  CoefficientMatrix bad = zero_coefficients(3, layout);
  bad.entries.row(0).setConstant(spec.c_a);
  bad.entries(1, 0) = 0.6;
  const TruthReport rep = validate_truth(bad, spec);
  CHECK_FALSE(rep.rows[0].a3_ok);
  CHECK(rep.rows[0].budget_usage > 1.0);

  // a "constant" row with a zero head is classified zero, not constant
  CoefficientMatrix miss = zero_coefficients(3, layout);
  miss.entries(0, 1) = 0.1;  // varying row present
  const TruthReport rep2 = validate_truth(miss, spec);
  CHECK(rep2.rows[1].cls == RowClass::Zero);
  CHECK_FALSE(rep2.rows[1].pattern_ok);
  CHECK_FALSE(rep2.pattern_ok);
}

TEST_CASE("generated varying rows satisfy the tail bound for all J") {
  const BlockLayout layout = BlockLayout::make(16, 4);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    for (double nu : {1.0, 2.0, 4.0}) {
      for (double r : {1.0, 2.0}) {
        const TruthSpec spec = simple_truth(1, 1, 0, nu, r, 1.0);
        const CoefficientMatrix a = generate_truth(spec, layout, seed);
        const double rp = r + 0.5 - 1.0 / nu;
        const double rstar = std::min(r, rp);
        for (int J : {1, 2, 4, 8, 16}) {
          double tail = 0.0;
          for (int k = J + 1; k < a.cols(); ++k) tail += a.entries(0, k) * a.entries(0, k);
          CHECK(tail <= std::pow(J + 1.0, -2.0 * rstar) + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("truncation and tail mass split the Frobenius norm") {
  const BlockLayout wide = BlockLayout::make(12, 3);
  const BlockLayout narrow = BlockLayout::make(7, 3);
  const CoefficientMatrix a = random_coeffs(3, wide, 5);
  const CoefficientMatrix head = truncate_columns(a, narrow);
  CHECK(head.entries.squaredNorm() + tail_mass(a, 7) ==
        doctest::Approx(a.entries.squaredNorm()));
}
