#include <gtest/gtest.h>

#include "support.hpp"

using namespace ffkit;
using namespace ffkit::test;

TEST(Propagate, ZeroDriveStaysIdentity) {
  const auto spec = build_constant(0, 0, 1);
  const auto tr = propagate(spec, make_grid(spec));
  ASSERT_EQ(tr.unitaries.size(), 2001u);
  for (const auto& u : tr.unitaries) EXPECT_EQ(u, Mat2c::identity());
}

TEST(Propagate, PiPulse) {
  const auto spec = build_constant(pi, 0, 0.5);
  const auto u = propagate(spec, make_grid(spec)).final();
  EXPECT_LE(max_abs_diff(u, pauli::X * cplx(0.0, -1.0)), 1e-6);
}

TEST(Propagate, FullRabiPeriod) {
  const auto spec = build_constant(pi, 0, 1.0);
  EXPECT_LE(max_abs_diff(propagate(spec, make_grid(spec)).final(), pauli::I * cplx(-1.0)), 1e-6);
}

TEST(Propagate, FirstUnitaryIsExactIdentity) {
  std::mt19937_64 rng(41);
  const auto tr = propagate(random_smooth_drive(rng), TimeGrid{0.001, 1000});
  EXPECT_EQ(tr.unitaries.front(), Mat2c::identity());
}

TEST(Propagate, UnitarityOverManySteps) {
  std::mt19937_64 rng(42);
  const auto spec = random_smooth_drive(rng, 5, 20.0);
  const TimeGrid g{1.0 / 200000, 200000};
  const Mat2c u = propagate_final(sample_envelope(spec, g), g.dt);
  EXPECT_LE(max_abs_diff(u.adjoint() * u, pauli::I), 1e-8);
  EXPECT_LE(std::abs(u.det() - 1.0), 1e-8);
}

TEST(Propagate, GridAlignedPiecewiseIsExactPerSegment) {
  const PiecewiseConstant p{{{0.3, 2.0, -1.0}, {0.45, 0.0, 3.0}, {0.25, -4.0, 0.5}}};
  const auto g = make_grid(p);
  const Mat2c u = propagate(p, g).final();
  Mat2c closed = pauli::I;
  for (const auto& s : p.segments) closed = su2_exp(PauliVec{s.duration * s.omega_i, s.duration * s.omega_q, 0}) * closed;
  EXPECT_LE(max_abs_diff(u, closed), 1e-12);
}

TEST(RotationTrace, ZeroDriveRowsAlongAxis) {
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const auto rot = trace_of(build_constant(0, 0, 1), a);
    for (const auto& r : rot.rows) EXPECT_EQ(r, PauliVec::unit(a));
  }
}

TEST(RotationTrace, ConstantXDriveClosedForm) {
  const double omega = 2.3;
  const auto rot = trace_of(build_constant(omega, 0, 1.7), Axis::z);
  for (std::size_t k = 0; k < rot.rows.size(); k += 97) {
    const double t = rot.grid.t(k);
    EXPECT_NEAR(rot.rows[k].x, 0.0, 1e-12);
    EXPECT_NEAR(rot.rows[k].y, std::sin(2 * omega * t), 1e-10);
    EXPECT_NEAR(rot.rows[k].z, std::cos(2 * omega * t), 1e-10);
  }
  for (std::size_t k = 0; k < rot.midpoints.size(); k += 101) {
    const double t = rot.grid.midpoint(k);
    EXPECT_NEAR(rot.midpoints[k].y, std::sin(2 * omega * t), 1e-10);
    EXPECT_NEAR(rot.midpoints[k].z, std::cos(2 * omega * t), 1e-10);
  }
}

TEST(RotationTrace, CommutingAxisIsConstant) {
  const auto rot = trace_of(build_constant(pi, 0, 1), Axis::x);
  for (const auto& r : rot.rows) EXPECT_LE(norm(r - PauliVec{1, 0, 0}), 1e-12);
}

TEST(RotationTrace, RowsAreUnitVectors) {
  std::mt19937_64 rng(43);
  for (int n = 0; n < 5; ++n) {
    const auto spec = random_smooth_drive(rng);
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
      const auto rot = trace_of(spec, a);
      for (const auto& r : rot.rows) EXPECT_NEAR(norm(r), 1.0, 1e-10);
      for (const auto& r : rot.midpoints) EXPECT_NEAR(norm(r), 1.0, 1e-10);
      EXPECT_EQ(rot.rows.front(), PauliVec::unit(a));
    }
  }
}

TEST(RotationTrace, RebuildsInteractionOperator) {
  // sum_j R_j sigma_j = U^dag sigma_i U
  std::mt19937_64 rng(44);
  const auto spec = random_smooth_drive(rng);
  const auto g = make_grid(spec);
  const auto tr = propagate(spec, g);
  const auto rot = rotation_trace(tr, Axis::y);
  for (std::size_t k = 0; k < rot.rows.size(); k += 173) {
    const Mat2c& u = tr.unitaries[k];
    EXPECT_LE(max_abs_diff(to_matrix(rot.rows[k]), u.adjoint() * pauli::Y * u), 1e-12);
  }
}

TEST(Convergence, ConstantDriveIsAtRoundingFloor) {
  const auto spec = build_constant(pi, 0, 1);
  EXPECT_GE(convergence_check(spec, make_grid(spec)), 1.9);
}

TEST(Convergence, ThreeHarmonicIsSecondOrder) {
  const auto spec = build_three_harmonic(-19.46, -0.49001, -1.04785, 1.0, 1);
  const double order = convergence_check(spec, make_grid(spec));
  EXPECT_GE(order, 1.9);
  EXPECT_LE(order, 2.1);
}

TEST(Convergence, AlignedPiecewiseIsSecondOrderOrBetter) {
  const auto spec = build_hahn_echo(0.8, 0.5);
  EXPECT_GE(convergence_check(spec, make_grid(spec)), 1.9);
  const PiecewiseConstant p{{{0.5, 1.0, 0.0}, {0.5, 0.0, 2.0}}};
  EXPECT_GE(convergence_check(p, make_grid(p)), 1.9);
}

TEST(Convergence, SmoothRandomDrivesAreSecondOrder) {
  std::mt19937_64 rng(45);
  for (int n = 0; n < 5; ++n) {
    const auto spec = random_smooth_drive(rng);
    EXPECT_GE(convergence_check(spec, make_grid(spec)), 1.9);
  }
}

TEST(Convergence, OddStepCountRejected) {
  const auto spec = build_constant(pi, 0, 1);
  EXPECT_THROW(convergence_check(spec, TimeGrid{1.0 / 999, 999}), ValidationError);
}
