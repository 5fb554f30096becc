#include <gtest/gtest.h>

#include "support.hpp"

using namespace ffkit;
using namespace ffkit::test;

namespace {

constexpr cplx i1(0.0, 1.0);

void expect_matrix_near(const Mat2c& a, const Mat2c& b, double tol) { EXPECT_LE(max_abs_diff(a, b), tol); }

}  // namespace

TEST(PauliDecompose, SigmaZ) {
  const auto d = pauli_decompose(pauli::Z);
  EXPECT_EQ(d.c0, cplx(0.0));
  EXPECT_EQ(d.c.x, cplx(0.0));
  EXPECT_EQ(d.c.y, cplx(0.0));
  EXPECT_EQ(d.c.z, cplx(1.0));
}

TEST(PauliDecompose, Identity) {
  const auto d = pauli_decompose(pauli::I);
  EXPECT_EQ(d.c0, cplx(1.0));
  EXPECT_EQ(norm(d.c), 0.0);
}

TEST(PauliDecompose, Linearity) {
  const Mat2c m = pauli::X * cplx(3.0) + pauli::Y * cplx(0.0, 2.0);
  const auto d = pauli_decompose(m);
  EXPECT_EQ(d.c0, cplx(0.0));
  EXPECT_EQ(d.c.x, cplx(3.0));
  EXPECT_EQ(d.c.y, cplx(0.0, 2.0));
  EXPECT_EQ(d.c.z, cplx(0.0));
}

TEST(PauliDecompose, ReconstructionIsIdentity) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Mat2c m = random_matrix(rng);
    const auto d = pauli_decompose(m);
    expect_matrix_near(pauli_reconstruct(d.c0, d.c), m, 1e-15);
  }
}

TEST(Su2Exp, ZeroIsIdentityExactly) { EXPECT_EQ(su2_exp(PauliVec{}), Mat2c::identity()); }

TEST(Su2Exp, QuarterTurnIsMinusISigmaX) {
  expect_matrix_near(su2_exp(PauliVec{pi / 2, 0, 0}), pauli::X * cplx(0.0, -1.0), 1e-15);
}

TEST(Su2Exp, RandomIsSpecialUnitary) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const Mat2c u = su2_exp(random_vec(rng, 5.0));
    expect_matrix_near(u.adjoint() * u, pauli::I, 1e-12);
    EXPECT_NEAR(std::abs(u.det() - 1.0), 0.0, 1e-12);
  }
}

TEST(Su2Exp, InverseIsNegatedGenerator) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 200; ++n) {
    const PauliVec a = random_vec(rng, 4.0);
    expect_matrix_near(su2_exp(a) * su2_exp(-a), pauli::I, 1e-12);
  }
}

TEST(Su2Exp, ParallelGeneratorsAdd) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const PauliVec a = random_vec(rng, 2.0);
    const double s = uniform(rng, -3.0, 3.0);
    expect_matrix_near(su2_exp(a) * su2_exp(s * a), su2_exp((1.0 + s) * a), 1e-12);
  }
}

TEST(Su2Exp, MatchesTaylorSeries) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 50; ++n) {
    const PauliVec a = random_vec(rng, 1.0);
    const Mat2c g = to_matrix(a) * cplx(0.0, -1.0);
    Mat2c term = pauli::I, sum = pauli::I;
    for (int k = 1; k < 40; ++k) {
      term = term * g * cplx(1.0 / k);
      sum += term;
    }
    expect_matrix_near(su2_exp(a), sum, 1e-13);
  }
}

TEST(Su2Exp, ComplexGeneratorAgreesOnRealInput) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 100; ++n) {
    const PauliVec a = random_vec(rng, 3.0);
    expect_matrix_near(su2_exp(to_complex(a)), su2_exp(a), 1e-13);
  }
  expect_matrix_near(su2_exp(CPauliVec{}), pauli::I, 0.0);
}

TEST(Su2Exp, ComplexGeneratorHasUnitDeterminant) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 100; ++n) {
    const CPauliVec a{cplx(uniform(rng, -1, 1), uniform(rng, -1, 1)), cplx(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                      cplx(uniform(rng, -1, 1), uniform(rng, -1, 1))};
    EXPECT_NEAR(std::abs(su2_exp(a).det() - 1.0), 0.0, 1e-12);
  }
}

TEST(Su2Log, InvertsExpOnPrincipalBranch) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 200; ++n) {
    PauliVec a = random_vec(rng, 1.0);
    if (norm(a) > 2.5) continue;
    const auto lg = su2_log(su2_exp(a));
    EXPECT_LE(norm(lg.coeffs.imag()), 1e-12);
    EXPECT_LE(norm(lg.coeffs.real() - a), 1e-12 * std::max(1.0, norm(a)));
  }
}

TEST(Su2Log, SmallAnglesStayAccurate) {
  for (double s : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const PauliVec a{0.3 * s, -0.5 * s, 0.8 * s};
    const auto lg = su2_log(su2_exp(a));
    EXPECT_LE(norm(lg.coeffs.real() - a), 1e-15 + 1e-10 * s);
  }
}

TEST(Commutator, PauliAlgebra) {
  expect_matrix_near(commutator(pauli::X, pauli::Y), pauli::Z * (2.0 * i1), 0.0);
  expect_matrix_near(commutator(pauli::Z, pauli::X), pauli::Y * (2.0 * i1), 0.0);
  expect_matrix_near(commutator(pauli::Y, pauli::Z), pauli::X * (2.0 * i1), 0.0);
}

TEST(Commutator, SelfCommutatorVanishes) {
  std::mt19937_64 rng(10);
  const Mat2c a = random_matrix(rng);
  EXPECT_EQ(commutator(a, a), Mat2c::zero());
}

TEST(Commutator, MatchesCrossProduct) {
  // [a.sigma, b.sigma] = 2i (a x b).sigma
  std::mt19937_64 rng(12);
  for (int n = 0; n < 50; ++n) {
    const PauliVec a = random_vec(rng), b = random_vec(rng);
    expect_matrix_near(commutator(to_matrix(a), to_matrix(b)), to_matrix(cross(a, b)) * (2.0 * i1), 1e-14);
  }
}

TEST(OperatorNorm, KnownValues) {
  EXPECT_NEAR(operator_norm(pauli::X * cplx(3.0)), 3.0, 1e-14);
  EXPECT_NEAR(operator_norm(Mat2c{0.0, 2.0, 0.0, 0.0}), 2.0, 1e-14);
  EXPECT_NEAR(operator_norm(su2_exp(PauliVec{0.3, 0.1, -0.2})), 1.0, 1e-14);
}
