#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace ffkit;
using namespace ffkit::test;

namespace {

/// Brute-force A_2 by the defining double integral over held steps (O(n^2)).
PauliVec brute_second_order(const RotationTrace& rot) {
  const double h = rot.grid.dt;
  PauliVec acc;
  const auto& b = rot.midpoints;
  for (std::size_t i = 0; i < b.size(); ++i) {
    PauliVec inner;
    for (std::size_t j = 0; j < i; ++j) inner += h * b[j];
    // within one held step the integrand B x B vanishes
    acc += h * cross(b[i], inner);
  }
  return acc;
}

/// Exact logarithm of V(delta) for a small real strength, used as an independent order oracle.
PauliVec log_coefficients(const RotationTrace& rot, double delta) {
  return su2_log(interaction_propagator(rot, delta)).coeffs.real();
}

}  // namespace

TEST(MagnusQuadrature, BareDrive) {
  const double T = 1.3;
  const auto s = magnus_quadrature(trace_of(build_constant(0, 0, T)), 3);
  EXPECT_NEAR(norm(s[1] - PauliVec{0, 0, T}), 0.0, 1e-12);
  EXPECT_LE(norm(s[2]), 1e-12 * T * T);
  EXPECT_LE(norm(s[3]), 1e-12 * T * T * T);
  EXPECT_EQ(s.method, MagnusMethod::quadrature);
}

TEST(MagnusQuadrature, FullRabiPeriodCancelsFirstOrder) {
  EXPECT_LE(norm(magnus_quadrature(trace_of(dressed(1)), 1)[1]), 1e-12);
}

TEST(MagnusQuadrature, HahnFirstOrderIsSemicircleDiameter) {
  // A_1 = int B; the pi-pulse contributes int_0^{t_pi} sin(2 Omega t) dt = 1/Omega = 1/pi along y.
  const auto a1 = magnus_quadrature(trace_of(build_hahn_echo(0.8, 0.5)), 1)[1];
  EXPECT_NEAR(a1.x, 0.0, 1e-12);
  EXPECT_NEAR(a1.y, 1.0 / pi, 1e-6);
  EXPECT_NEAR(a1.z, 0.0, 1e-12);
}

TEST(MagnusQuadrature, SecondOrderMatchesDoubleIntegral) {
  std::mt19937_64 rng(71);
  const auto rot = trace_of(random_smooth_drive(rng), Axis::z, 300);
  const auto s = magnus_quadrature(rot, 2);
  EXPECT_LE(norm(s[2] - brute_second_order(rot)), 1e-12);
}

TEST(MagnusQuadrature, HigherOrdersUnsupported) {
  EXPECT_THROW(magnus_quadrature(trace_of(dressed(1)), 4), UnsupportedOrderError);
  EXPECT_THROW(magnus_quadrature(trace_of(dressed(1)), 0), UnsupportedOrderError);
}

TEST(MagnusQuadrature, MatchesLogarithmOrderByOrder) {
  // a(delta) = delta A1 + delta^2 A2 + delta^3 A3 + O(delta^4) from the exact logarithm.
  std::mt19937_64 rng(72);
  const auto rot = trace_of(random_smooth_drive(rng), Axis::x);
  const auto s = magnus_quadrature(rot, 3);
  const double T = rot.total_time();
  for (double d : {0.02 / T, 0.01 / T}) {
    const PauliVec series = d * s[1] + d * d * s[2] + d * d * d * s[3];
    const double err = norm(log_coefficients(rot, d) - series);
    EXPECT_LE(err, 20.0 * std::pow(d * T, 4) * T) << "delta T = " << d * T;
  }
}

TEST(MagnusTaylor, BareDriveMatchesQuadrature) {
  const auto rot = trace_of(build_constant(0, 0, 1));
  const auto t = magnus_taylor(rot, 5);
  const auto q = magnus_quadrature(rot, 3);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_LE(norm(t[k] - q[k]), 1e-12);
  for (std::size_t k = 2; k <= 5; ++k) EXPECT_LE(norm(t[k]), 1e-10);
  EXPECT_EQ(t.method, MagnusMethod::taylor);
}

TEST(MagnusTaylor, DressedDriveCrossCheck) {
  const auto rot = trace_of(dressed(1));
  const auto t = magnus_taylor(rot, 3);
  const auto q = magnus_quadrature(rot, 3);
  EXPECT_LE(norm(t[1]), 1e-8);
  EXPECT_GT(norm(t[2]), 1e-3);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_LE(norm(t[k] - q[k]), 1e-8 * std::pow(1.0, k));
}

TEST(MagnusTaylor, AgreesWithQuadratureOnAcceptanceDrives) {
  const double a = std::sqrt(2.0) * pi;
  const std::vector<DriveSpec> drives{build_constant(0, 0, 1), dressed(5), build_cosine(a, solve_smart_period(a), 5),
                                      build_hahn_echo(0.8, 0.5), pinned_three_harmonic(1)};
  for (const auto& d : drives) {
    for (Axis axis : {Axis::x, Axis::z}) {
      const auto rot = trace_of(d, axis);
      const double T = rot.total_time();
      const auto t = magnus_taylor(rot, 3);
      const auto q = magnus_quadrature(rot, 3);
      for (std::size_t k = 1; k <= 3; ++k)
        EXPECT_LE(norm(t[k] - q[k]), 1e-8 * std::pow(T, static_cast<double>(k))) << "k = " << k;
    }
  }
}

TEST(MagnusTaylor, FirstTermEqualsCurveEndpoint) {
  std::mt19937_64 rng(73);
  for (int n = 0; n < 3; ++n) {
    const auto rot = trace_of(random_smooth_drive(rng), static_cast<Axis>(n));
    const auto s = magnus_taylor(rot, 2);
    EXPECT_LE(norm(s[1] - space_curve(rot, 0.0, 0.0).endpoint()), 1e-9 * rot.total_time());
  }
}

TEST(MagnusTaylor, HalvesRadiusOnBranchRisk) {
  const auto rot = trace_of(dressed(1));
  TaylorDiagnostics diag;
  // rho T = 2 is too wide a circle for this drive; the radius is halved until the inversion is clean.
  const auto s = magnus_taylor(rot, 3, 2.0, &diag);
  EXPECT_LT(diag.rho, 2.0);
  EXPECT_LE(diag.residual, 1e-8);
  EXPECT_LE(norm(s[2] - magnus_quadrature(rot, 3)[2]), 1e-8);
}

TEST(MagnusTaylor, GivesUpAfterSixHalvings) {
  const auto rot = trace_of(build_constant(0, 0, 1));
  EXPECT_THROW(magnus_taylor(rot, 2, 400.0), BranchRiskError);
}

TEST(MagnusTaylor, InvalidOrder) { EXPECT_THROW(magnus_taylor(trace_of(dressed(1)), 0), ValidationError); }

TEST(MagnusTaylor, PinnedThreeHarmonicCancelsThroughSixthOrder) {
  const auto s = magnus_taylor(trace_of(pinned_three_harmonic(1)), 7);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_LE(s.scaled_norm(k), 1e-6) << "k = " << k;
  EXPECT_GT(s.scaled_norm(7), 0.0);
}

TEST(MagnusTaylor, PinnedThreeHarmonicSeventhOrderAlongX) {
  const auto a7 = magnus_taylor(trace_of(pinned_three_harmonic(1)), 7)[7];
  EXPECT_LE(angle_between_deg(a7, PauliVec{std::copysign(1.0, a7.x), 0, 0}), 5.0);
}

TEST(MagnusTaylor, PinnedThreeHarmonicBelowCancellationThreshold) {
  const auto s = magnus_taylor(trace_of(pinned_three_harmonic(1)), 6);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_LE(s.scaled_norm(k), 1e-4) << "k = " << k;
  EXPECT_LE(s.scaled_norm(1), 1e-12);
  EXPECT_LE(s.scaled_norm(2), 1e-12);
}

TEST(MagnusParity, XDriveZNoiseSplitsByOrder) {
  // B(t) stays in the yz-plane: odd orders lie in that plane, even orders along x.
  std::mt19937_64 rng(74);
  HarmonicSeries h{1.0, 1, {}};
  for (int n = 1; n <= 3; ++n) h.terms.push_back({n, uniform(rng, -8, 8), 0.0});
  const auto s = magnus_taylor(trace_of(h), 6);
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto& a = s[k];
    const double scale = std::max(norm(a), 1e-300);
    if (k % 2 == 1)
      EXPECT_LE(std::abs(a.x) / scale, 1e-8) << "k = " << k;
    else
      EXPECT_LE(std::hypot(a.y, a.z) / scale, 1e-8) << "k = " << k;
  }
}

TEST(MagnusParity, EvenDriveHasNoFirstOrderY) {
  // Cosine harmonics are even about T/2, so sin(2 theta(t)) is odd about T/2 and A_1 has no y part.
  std::mt19937_64 rng(75);
  for (int n = 0; n < 5; ++n) {
    HarmonicSeries h{1.0, 1, {}};
    for (int m = 1; m <= 5; m += 2) h.terms.push_back({m, uniform(rng, -10, 10), 0.0});
    EXPECT_LE(std::abs(magnus_quadrature(trace_of(h), 1)[1].y), 1e-12);
  }
}

TEST(SeriesResidual, ZeroStrength) {
  const auto spec = pinned_three_harmonic(1);
  const auto g = make_grid(spec);
  const auto s = magnus_taylor(rotation_trace(spec, g, Axis::z), 3);
  EXPECT_LE(series_residual(s, spec, g, 0.0), 1e-12);
}

TEST(SeriesResidual, BareSeriesIsExact) {
  const auto spec = build_constant(0, 0, 1);
  const auto g = make_grid(spec);
  const auto s = magnus_quadrature(rotation_trace(spec, g, Axis::z), 1);
  for (double d : {0.05, 0.2, 0.5}) EXPECT_LE(series_residual(s, spec, g, d), 1e-10);
}

TEST(SeriesResidual, DressedSlopeAboveTruncationOrder) {
  const auto spec = dressed(1);
  const auto g = make_grid(spec);
  const auto s = magnus_quadrature(rotation_trace(spec, g, Axis::z), 2);
  std::vector<double> x, y;
  for (double d : {0.02, 0.04, 0.08}) {
    x.push_back(std::log(d));
    y.push_back(std::log(series_residual(s, spec, g, d)));
  }
  const double xm = (x[0] + x[1] + x[2]) / 3, ym = (y[0] + y[1] + y[2]) / 3;
  double num = 0, den = 0;
  for (int k = 0; k < 3; ++k) {
    num += (x[k] - xm) * (y[k] - ym);
    den += (x[k] - xm) * (x[k] - xm);
  }
  EXPECT_GE(num / den, 2.8);
}

TEST(SeriesResidual, GuardOnStrength) {
  const auto spec = dressed(1);
  const auto g = make_grid(spec);
  const auto s = magnus_quadrature(rotation_trace(spec, g, Axis::z), 1);
  EXPECT_THROW(series_residual(s, spec, g, 0.6), ValidationError);
}

TEST(SeriesDecay, FirstTermDominatesPinnedThreeHarmonic) {
  const auto spec = pinned_three_harmonic(1);
  const auto g = make_grid(spec);
  const auto rot = rotation_trace(spec, g, Axis::z);
  const auto s7 = magnus_taylor(rot, 7);
  MagnusSeries s1 = s7;
  s1.terms.resize(1);
  for (double dT : {0.1, 0.2, 0.3}) {
    const auto a1 = su2_log(series_propagator(s1, dT)).coeffs.real();
    const auto a7 = su2_log(series_propagator(s7, dT)).coeffs.real();
    EXPECT_LE(norm(a1 - a7), 0.05 * std::max(norm(a7), 1e-300) + 1e-9) << "delta T = " << dT;
  }
}

TEST(SeriesDecay, FirstTermDominatesUnpinnedThreeHarmonic) {
  // reference shape at its literal amplitude, where A_1 is not cancelled
  const auto spec = build_three_harmonic(-2.57453, -0.49001, -1.04785, 1.0, 1);
  const auto s7 = magnus_taylor(trace_of(spec), 7);
  MagnusSeries s1 = s7;
  s1.terms.resize(1);
  for (std::size_t k = 1; k < 7; ++k) EXPECT_GT(s7.scaled_norm(k), s7.scaled_norm(7)) << "k = " << k;
  for (double dT : {0.1, 0.2, 0.3}) {
    const auto a1 = su2_log(series_propagator(s1, dT)).coeffs.real();
    const auto a7 = su2_log(series_propagator(s7, dT)).coeffs.real();
    EXPECT_LE(norm(a1 - a7), 0.05 * norm(a7)) << "delta T = " << dT;
  }
}
