#include <gtest/gtest.h>

#include "support.hpp"

using namespace ffkit;
using namespace ffkit::test;

namespace {

const PiecewiseConstant hahn = build_hahn_echo(0.8, 0.5);

}  // namespace

TEST(SpaceCurve, FreeEvolutionIsStraightLine) {
  const double T = 1.7;
  const auto c = space_curve(trace_of(build_constant(0, 0, T)), 0.0, 0.0);
  EXPECT_EQ(c.points.front(), PauliVec{});
  for (std::size_t k = 0; k < c.points.size(); k += 50) {
    EXPECT_EQ(c.points[k].x, 0.0);
    EXPECT_EQ(c.points[k].y, 0.0);
    EXPECT_NEAR(c.points[k].z, c.grid.t(k), 1e-12);
  }
  EXPECT_NEAR(c.endpoint().z, T, 1e-12);
}

TEST(SpaceCurve, HahnDcSemicircle) {
  // The pi-pulse traces a half turn of radius 1/(2 Omega) in the zy-plane with Omega = pi rad/us.
  const double omega = pi;
  const auto c = space_curve(trace_of(hahn), 0.0, 0.0);
  EXPECT_LE(std::abs(c.endpoint().z), 1e-12);
  EXPECT_NEAR(c.endpoint().y, 2.0 * (1.0 / (2.0 * omega)), 1e-6);
  EXPECT_NEAR(c.endpoint().y, 1.0 / pi, 1e-6);
  EXPECT_EQ(c.endpoint().x, 0.0);
  // During the pulse the curve stays on the circle of radius R centred at (y, z) = (R, 0.4).
  const double R = 1.0 / (2.0 * omega);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    const double t = c.grid.t(k);
    if (t < 0.4 || t > 0.9) continue;
    const double dy = c.points[k].y, dz = c.points[k].z - 0.4;
    EXPECT_NEAR(std::hypot(dy - R, dz), R, 1e-6) << "t = " << t;
  }
}

TEST(SpaceCurve, HahnNoiseEnhancement) {
  const auto rot = trace_of(hahn);
  const double z0 = std::abs(space_curve(rot, 0.0, 0.0).endpoint().z);
  const auto c90 = space_curve(rot, 0.54, 90.0).endpoint();
  const auto c180 = space_curve(rot, 0.54, 180.0).endpoint();
  EXPECT_GT(std::abs(c90.z), z0);
  EXPECT_GT(std::abs(c90.z), 0.5);
  EXPECT_LE(std::abs(c180.z), 0.1 * std::abs(c180.y));
}

TEST(SpaceCurve, SpeedAndArcLengthBounded) {
  std::mt19937_64 rng(61);
  for (int n = 0; n < 5; ++n) {
    const auto rot = trace_of(random_smooth_drive(rng));
    const auto c = space_curve(rot, uniform(rng, 0, 5), uniform(rng, 0, 360));
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k)
      EXPECT_LE(norm(c.points[k + 1] - c.points[k]), c.grid.dt * (1 + 1e-9));
    EXPECT_LE(arc_length(c), rot.total_time() * (1 + 1e-9));
  }
}

TEST(SpaceCurve, PhaseLinearity) {
  std::mt19937_64 rng(62);
  const auto rot = trace_of(random_smooth_drive(rng), Axis::y);
  const double f = 1.37;
  const auto r0 = space_curve(rot, f, 0.0).endpoint();
  const auto r90 = space_curve(rot, f, 90.0).endpoint();
  for (double phi : {17.0, 123.0, -75.0, 300.0}) {
    const double p = deg_to_rad(phi);
    const auto expect = std::cos(p) * r0 + std::sin(p) * r90;
    EXPECT_LE(norm(space_curve(rot, f, phi).endpoint() - expect), 1e-12);
  }
}

TEST(CurveFfConsistency, DcIsExact) {
  std::mt19937_64 rng(63);
  for (int n = 0; n < 3; ++n) {
    const auto rot = trace_of(random_smooth_drive(rng));
    EXPECT_LE(curve_ff_consistency(rot, 0.0, 0.0), 1e-12 * rot.total_time());
  }
}

TEST(CurveFfConsistency, HahnAndDressedCases) {
  const auto rot = trace_of(hahn);
  for (double phi : {90.0, 180.0}) EXPECT_LE(curve_ff_consistency(rot, 0.54, phi), 1e-9 * 1.3);
  const auto d = trace_of(dressed(1));
  EXPECT_LE(curve_ff_consistency(d, 1.0, -90.0), 1e-9);
}

TEST(CurveFfConsistency, RandomDrivesFrequenciesAndPhases) {
  std::mt19937_64 rng(64);
  for (int n = 0; n < 20; ++n) {
    const auto rot = trace_of(random_smooth_drive(rng), static_cast<Axis>(n % 3), 500);
    const double T = rot.total_time();
    EXPECT_LE(curve_ff_consistency(rot, uniform(rng, 0, 10), uniform(rng, -360, 360)), 1e-9 * T);
  }
}

TEST(Closure, DressedClosesBareDoesNot) {
  EXPECT_TRUE(closure_test(space_curve(trace_of(dressed(3)), 0.0, 0.0)));
  EXPECT_FALSE(closure_test(space_curve(trace_of(build_constant(0, 0, 1)), 0.0, 0.0)));
}

TEST(Closure, PinnedThreeHarmonicCloses) {
  EXPECT_TRUE(closure_test(space_curve(trace_of(pinned_three_harmonic(1)), 0.0, 0.0)));
}

TEST(Closure, EndpointEqualsFirstMagnusTerm) {
  const auto rot = trace_of(hahn);
  EXPECT_LE(norm(space_curve(rot, 0.0, 0.0).endpoint() - first_order_term(rot)), 1e-9 * 1.3);
}
