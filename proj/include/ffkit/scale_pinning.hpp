#pragma once

// First-order (A_1 = 0) conditions that fix the physical scale of a drive
// shape: the SMART period of a single-cosine drive and the amplitude scale
// of a harmonic shape over one base period.

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "drive.hpp"
#include "errors.hpp"
#include "magnus.hpp"
#include "propagation.hpp"

namespace ffkit {

/// First zero of the Bessel function J0; a single-cosine drive of amplitude A
/// over period T cancels A_1 exactly when A T / pi equals this value.
inline constexpr double kBesselJ0FirstZero = 2.404825557695773;

namespace detail {

/// Scans g on [lo, hi] in `step` increments and refines the first sign change.
inline double first_root(const std::function<double(double)>& g, double lo, double hi, double step) {
  double x0 = lo;
  double g0 = g(x0);
  if (g0 == 0.0) return x0;
  while (x0 < hi) {
    const double x1 = std::min(hi, x0 + step);
    const double g1 = g(x1);
    if (g1 == 0.0) return x1;
    if ((g0 < 0.0) != (g1 < 0.0)) {
      std::uintmax_t iters = 200;
      const auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); };
      const auto r = boost::math::tools::toms748_solve(g, x0, x1, g0, g1, tol, iters);
      return 0.5 * (r.first + r.second);
    }
    x0 = x1;
    g0 = g1;
  }
  throw SearchFailureError("first-order root not bracketed in the search window");
}

/// A_1 of a harmonic drive over one base period, projected on the perturbation axis.
inline double first_order_projection(const HarmonicSeries& one_period, std::size_t steps, Axis axis) {
  const TimeGrid grid{1.0 / (one_period.base_freq * static_cast<double>(steps)), steps};
  return first_order_term(rotation_trace(one_period, grid, axis))[axis];
}

}  // namespace detail

/// Smallest period T such that amplitude*cos(2 pi t/T) has A_1(T) = 0 for
/// z noise. The root is found on the z projection of A_1 (which changes sign
/// there; the y projection vanishes by symmetry). The window is
/// A T / pi in [0.1, 100].
inline double solve_smart_period(double amplitude, std::size_t steps_per_period = kDefaultStepsPerPeriod) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ValidationError("smart period: amplitude must be positive");
  const auto g = [&](double index) {
    const double T = index * std::numbers::pi / amplitude;
    return detail::first_order_projection(build_cosine(amplitude, T, 1), steps_per_period, Axis::z) / T;
  };
  const double index = detail::first_root(g, 0.1, 100.0, 0.05);
  return index * std::numbers::pi / amplitude;
}

/// Scales a harmonic shape (its amplitudes taken as the unit pattern) by the
/// smallest factor s with sign `sign` such that A_1 vanishes over one base
/// period. The search variable is s T, scanned over (0, max_scale_time].
inline HarmonicSeries pin_first_order_scale(const HarmonicSeries& shape, double sign = 1.0,
                                            std::size_t steps_per_period = kDefaultStepsPerPeriod,
                                            double max_scale_time = 200.0) {
  validate(shape);
  const double T = 1.0 / shape.base_freq;
  auto scaled = [&](double s) {
    HarmonicSeries h = shape;
    h.periods = 1;
    for (auto& t : h.terms) {
      t.amp_i *= s;
      t.amp_q *= s;
    }
    return h;
  };
  const double dir = sign < 0.0 ? -1.0 : 1.0;
  const auto g = [&](double st) {
    return detail::first_order_projection(scaled(dir * st / T), steps_per_period, Axis::z) / T;
  };
  const double st = detail::first_root(g, 0.05, max_scale_time, 0.05);
  HarmonicSeries out = scaled(dir * st / T);
  out.periods = shape.periods;
  return out;
}

/// Scale factor applied by pin_first_order_scale (ratio of amplitudes).
inline double pinned_scale(const HarmonicSeries& shape, const HarmonicSeries& pinned) {
  for (std::size_t k = 0; k < shape.terms.size(); ++k) {
    if (shape.terms[k].amp_i != 0.0) return pinned.terms[k].amp_i / shape.terms[k].amp_i;
    if (shape.terms[k].amp_q != 0.0) return pinned.terms[k].amp_q / shape.terms[k].amp_q;
  }
  return 0.0;
}

/// Three-harmonic drive with shape (gamma, delta) and amplitude scale pinned
/// by A_1 = 0; the sign of `omega` selects the scale direction.
inline HarmonicSeries build_pinned_three_harmonic(double omega, double gamma, double delta, double f_base, int periods,
                                                  std::size_t steps_per_period = kDefaultStepsPerPeriod) {
  const HarmonicSeries unit = build_three_harmonic(1.0, gamma, delta, f_base, periods);
  return pin_first_order_scale(unit, omega, steps_per_period);
}

}  // namespace ffkit
