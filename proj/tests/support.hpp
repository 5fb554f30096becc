#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include <ffkit/ffkit.hpp>

namespace ffkit::test {

inline constexpr double pi = std::numbers::pi;

inline std::string data_path(const std::string& name) { return std::string(FFKIT_DATA_DIR) + "/" + name; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline PauliVec random_vec(std::mt19937_64& rng, double scale = 1.0) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

inline Mat2c random_matrix(std::mt19937_64& rng) {
  auto c = [&] { return cplx(uniform(rng, -2, 2), uniform(rng, -2, 2)); };
  return {c(), c(), c(), c()};
}

/// Smooth random drive: a few random harmonics on both quadratures over one 1 us period.
inline HarmonicSeries random_smooth_drive(std::mt19937_64& rng, int max_harmonic = 4, double amplitude = 6.0) {
  HarmonicSeries h{1.0, 1, {}};
  for (int n = 1; n <= max_harmonic; ++n)
    h.terms.push_back({n, uniform(rng, -amplitude, amplitude), uniform(rng, -amplitude, amplitude)});
  return h;
}

/// Dressed drive: constant 1 MHz Rabi on x over `periods` us.
inline PiecewiseConstant dressed(int periods) { return build_constant(pi, 0.0, static_cast<double>(periods)); }

/// Three-harmonic drive with the reference shape and pinned scale.
inline HarmonicSeries pinned_three_harmonic(int periods = 1) {
  return build_pinned_three_harmonic(-2.57453, -0.49001, -1.04785, 1.0, periods);
}

inline RotationTrace trace_of(const DriveSpec& spec, Axis axis = Axis::z,
                              std::size_t steps_per_period = kDefaultStepsPerPeriod) {
  return rotation_trace(spec, make_grid(spec, steps_per_period), axis);
}

}  // namespace ffkit::test
