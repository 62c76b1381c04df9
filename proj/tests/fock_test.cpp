#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sqz/analytic.hpp"
#include "sqz/fock.hpp"

namespace sqz {
namespace {

constexpr double kPi = std::numbers::pi;

double block_norm(const OperatorMatrix& m, int block) {
  return m.topLeftCorner(block, block).norm();
}

TEST(FockCutoff, RejectsNonPositive) {
  EXPECT_THROW(FockCutoff(0), InvalidInput);
  EXPECT_THROW(FockCutoff(-3), InvalidInput);
  EXPECT_EQ(FockCutoff(1).dim(), 1);
}

TEST(LadderMatrices, SingleLevelIsZero) {
  const auto [a, ad] = ladder_matrices(FockCutoff(1));
  ASSERT_EQ(a.rows(), 1);
  EXPECT_EQ(std::abs(a(0, 0)), 0.0);
  EXPECT_EQ(std::abs(ad(0, 0)), 0.0);
}

TEST(LadderMatrices, ThreeLevels) {
  const auto [a, ad] = ladder_matrices(FockCutoff(3));
  OperatorMatrix expected = OperatorMatrix::Zero(3, 3);
  expected(0, 1) = 1.0;
  expected(1, 2) = std::sqrt(2.0);
  EXPECT_EQ((a - expected).norm(), 0.0);
  EXPECT_EQ((ad - expected.adjoint()).norm(), 0.0);
}

// sqrt(m) * sqrt(m) can differ from m in the last bit.
TEST(LadderMatrices, NumberOperatorIsDiagonal) {
  const auto [a, ad] = ladder_matrices(FockCutoff(8));
  const OperatorMatrix number = ad * a;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i == j) {
        EXPECT_NEAR(number(i, j).real(), i, 4e-16 * i);
        EXPECT_EQ(number(i, j).imag(), 0.0);
      } else {
        EXPECT_EQ(number(i, j), Complex(0.0, 0.0));
      }
    }
  }
}

TEST(QuadratureMatrices, TwoLevelEntries) {
  const auto [x, p] = quadrature_matrices(FockCutoff(2));
  EXPECT_DOUBLE_EQ(x(0, 1).real(), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(x(1, 0).real(), 1.0 / std::sqrt(2.0));
}

TEST(QuadratureMatrices, HermitianForEveryCutoff) {
  for (int dim : {1, 2, 5, 17, 64}) {
    const auto [x, p] = quadrature_matrices(FockCutoff(dim));
    EXPECT_EQ((x - x.adjoint()).norm(), 0.0) << dim;
    EXPECT_EQ((p - p.adjoint()).norm(), 0.0) << dim;
  }
}

TEST(QuadratureMatrices, SumOfSquaresIsTwoNPlusOneAwayFromEdge) {
  const int dim = 20;
  const auto [x, p] = quadrature_matrices(FockCutoff(dim));
  const OperatorMatrix lhs = x * x + p * p;
  OperatorMatrix expected = OperatorMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) expected(i, i) = 2.0 * i + 1.0;
  EXPECT_LT(block_norm(lhs - expected, dim - 1), 1e-13);
  // The last level has no partner above the cutoff.
  EXPECT_GT(std::abs(lhs(dim - 1, dim - 1) - expected(dim - 1, dim - 1)), 1.0);
}

TEST(DisplacementOperator, ZeroIsIdentity) {
  const OperatorMatrix d = displacement_operator(Complex{}, FockCutoff(10), 1e-12);
  EXPECT_LT((d - OperatorMatrix::Identity(10, 10)).norm(), 1e-15);
}

TEST(DisplacementOperator, MeanQuadratureOfCoherentState) {
  const FockCutoff dim(40);
  const OperatorMatrix d = displacement_operator(Complex{1.0, 0.0}, dim, 1e-10);
  StateVector s;
  s.amplitudes = d.col(0);
  s.norm_bound = 1e-10;
  EXPECT_NEAR(moments_numeric(s).mean_x, std::sqrt(2.0), 1e-10);
}

TEST(DisplacementOperator, ConjugationShiftsLowering) {
  const FockCutoff dim(40);
  const Complex alpha{0.5, 0.5};
  const OperatorMatrix d = displacement_operator(alpha, dim, 1e-10);
  const auto [a, ad] = ladder_matrices(dim);
  const OperatorMatrix shifted = d.adjoint() * a * d;
  const OperatorMatrix expected = a + alpha * OperatorMatrix::Identity(40, 40);
  EXPECT_LE(block_norm(shifted - expected, 20), 1e-9);
}

TEST(SqueezeOperator, ZeroIsIdentity) {
  const OperatorMatrix s = squeeze_operator(SqueezeParams::none(), FockCutoff(10), 1e-12);
  EXPECT_LT((s - OperatorMatrix::Identity(10, 10)).norm(), 1e-15);
}

TEST(SqueezeOperator, VacuumVarianceAtPhasePi) {
  const FockCutoff dim(60);
  const OperatorMatrix s = squeeze_operator(SqueezeParams::from_polar(0.5, kPi), dim, 1e-10);
  StateVector v;
  v.amplitudes = s.col(0);
  v.norm_bound = 1e-10;
  EXPECT_NEAR(moments_numeric(v).var_x, 0.5 * std::exp(-1.0), 1e-10);
}

TEST(SqueezeOperator, BogoliubovConjugation) {
  const FockCutoff dim(60);
  const SqueezeParams z = SqueezeParams::from_polar(0.5, 0.0);
  const OperatorMatrix s = squeeze_operator(z, dim, 1e-10);
  const auto [a, ad] = ladder_matrices(dim);
  const OperatorMatrix lhs = s.adjoint() * a * s;
  const OperatorMatrix rhs = z.lambda() * a + z.mu() * ad;
  EXPECT_LE(block_norm(lhs - rhs, 8), 1e-8);
}

TEST(BuildState, VacuumIsBasisVector) {
  const StateVector s = build_state(0, Complex{}, SqueezeParams::none(), FockCutoff(8), 1e-12);
  EXPECT_EQ(s.amplitudes(0), Complex(1.0, 0.0));
  EXPECT_EQ(s.amplitudes.tail(7).norm(), 0.0);
  EXPECT_EQ(s.leakage, 0.0);
}

TEST(BuildState, DisplacedFockMeanPhotonNumber) {
  const StateVector s =
      build_state(1, Complex{1.0, 0.0}, SqueezeParams::none(), FockCutoff(40), 1e-10);
  EXPECT_NEAR(moments_numeric(s).mean_n, 2.0, 1e-10);
}

TEST(BuildState, SqueezedFockMeanPhotonNumber) {
  const SqueezeParams z = SqueezeParams::from_polar(0.5, 0.0);
  const StateVector s = build_state(1, Complex{}, z, FockCutoff(60), 1e-10);
  const double expected = std::pow(std::cosh(0.5), 2) + 2.0 * std::pow(std::sinh(0.5), 2);
  EXPECT_NEAR(moments_numeric(s).mean_n, expected, 1e-10);
  EXPECT_NEAR(expected, 1.81462095222, 1e-10);
}

// D S |n> and S D |n> differ; only the former matches the closed forms.
TEST(BuildState, SqueezesBeforeDisplacing) {
  const int dim = 80;
  const Complex alpha{1.0, 0.5};
  const SqueezeParams z = SqueezeParams::from_polar(0.6, 0.9);
  const StateVector s = build_state(2, alpha, z, FockCutoff(dim), 1e-10);
  const OperatorMatrix d = displacement_operator(alpha, FockCutoff(dim), 1e-10);
  const OperatorMatrix sq = squeeze_operator(z, FockCutoff(dim), 1e-10);
  EXPECT_LT((s.amplitudes - (d * sq).col(2)).norm(), 1e-10);
  EXPECT_GT((s.amplitudes - (sq * d).col(2)).norm(), 1e-2);
}

TEST(BuildState, Errors) {
  EXPECT_THROW(build_state(8, Complex{}, SqueezeParams::none(), FockCutoff(8), 1e-10),
               InvalidInput);
  EXPECT_THROW(build_state(-1, Complex{}, SqueezeParams::none(), FockCutoff(8), 1e-10),
               InvalidInput);
  try {
    build_state(0, Complex{3.0, 0.0}, SqueezeParams::none(), FockCutoff(10), 1e-10);
    FAIL() << "expected CutoffTooSmall";
  } catch (const CutoffTooSmall& e) {
    EXPECT_GT(e.leakage(), 1e-10);
  }
}

TEST(MomentsNumeric, FockStates) {
  const MomentSet vac = moments_numeric(StateVector::basis(0, FockCutoff(10)));
  EXPECT_EQ(vac.mean_x, 0.0);
  EXPECT_EQ(vac.mean_p, 0.0);
  EXPECT_NEAR(vac.var_x, 0.5, 1e-15);
  EXPECT_NEAR(vac.var_p, 0.5, 1e-15);
  const MomentSet three = moments_numeric(StateVector::basis(3, FockCutoff(10)));
  EXPECT_NEAR(three.var_x, 3.5, 1e-14);
  EXPECT_NEAR(three.var_p, 3.5, 1e-14);
  EXPECT_NEAR(three.mean_n, 3.0, 1e-14);
}

TEST(MomentsNumeric, AgreesWithSqueezedNumberClosedForm) {
  const SqueezeParams z = SqueezeParams::from_polar(0.3, kPi);
  const Complex alpha{1.0, 0.0};
  const StateVector s = build_state(1, alpha, z, FockCutoff(60), 1e-10);
  EXPECT_LE(max_deviation(moments_numeric(s), squeezed_number_moments(1, alpha, z)), 1e-9);
}

TEST(MomentsNumeric, RejectsUnnormalizedState) {
  StateVector s = StateVector::basis(0, FockCutoff(4));
  s.amplitudes *= 1.1;
  EXPECT_THROW(moments_numeric(s), InvalidInput);
}

TEST(ChooseCutoff, VacuumUsesFloor) {
  EXPECT_EQ(choose_cutoff(0, Complex{}, SqueezeParams::none(), 1e-10).dim(), kCutoffFloor);
}

TEST(ChooseCutoff, LargeFockIndexRaisesStart) {
  EXPECT_GT(choose_cutoff(20, Complex{}, SqueezeParams::none(), 1e-10).dim(), 20);
}

TEST(ChooseCutoff, ResultPassesDoublingTest) {
  const SqueezeParams z = SqueezeParams::from_polar(0.5, 0.0);
  const Complex alpha{1.0, 0.0};
  const double eps = 1e-10;
  const FockCutoff dim = choose_cutoff(1, alpha, z, eps);
  const MomentSet at_dim = moments_numeric(build_state(1, alpha, z, dim, 1e-9));
  const MomentSet doubled = moments_numeric(build_state(1, alpha, z, FockCutoff(2 * dim.dim()), 1e-9));
  EXPECT_LT(max_deviation(at_dim, doubled), eps);
}

TEST(ChooseCutoff, CeilingExceededReportsLeakage) {
  try {
    choose_cutoff(0, Complex{10.0, 0.0}, SqueezeParams::from_polar(2.0, 0.0), 1e-10, 64);
    FAIL() << "expected CutoffTooSmall";
  } catch (const CutoffTooSmall& e) {
    EXPECT_GT(e.leakage(), 1e-10);
  }
  EXPECT_THROW(choose_cutoff(0, Complex{}, SqueezeParams::none(), 0.0), InvalidInput);
}

// Seeded sweep over the family: unitarity, partition identity, uncertainty
// floor and closed-form agreement.
TEST(FockProperties, SeededSweep) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = 1e-9;
  for (int i = 0; i < 12; ++i) {
    const int n = static_cast<int>(rng() % 4);
    const Complex alpha = std::polar(1.5 * unit(rng), 2.0 * kPi * unit(rng));
    const SqueezeParams z = SqueezeParams::from_polar(unit(rng), 2.0 * kPi * unit(rng));
    const FockCutoff dim = choose_cutoff(n, alpha, z, tol);
    SCOPED_TRACE("case " + std::to_string(i) + " dim " + std::to_string(dim.dim()));

    const OperatorMatrix d = displacement_operator(alpha, dim, tol);
    const OperatorMatrix s = squeeze_operator(z, dim, tol);
    const OperatorMatrix id = OperatorMatrix::Identity(dim.dim(), dim.dim());
    EXPECT_LE((d.adjoint() * d - id).norm(), 10 * tol);
    EXPECT_LE((s.adjoint() * s - id).norm(), 10 * tol);

    const MomentSet m = moments_numeric(build_state(n, alpha, z, dim, tol));
    EXPECT_LE(std::abs(energy_partition_residual(m)), 10 * tol);
    const double level = 2.0 * n + 1.0;
    EXPECT_GE(m.var_x * m.var_p, 0.25 * level * level - 1e-8);
    EXPECT_LE(max_deviation(m, squeezed_number_moments(n, alpha, z)), 1e-8);
  }
}

}  // namespace
}  // namespace sqz
