#pragma once

// Complex first-order filter function of a driven qubit, its Pauli
// components, the conventional switching-function filter and PSD overlap.
//
// F_ij(f, T) = (1/T) int_0^T R_j(t) exp(i 2 pi f (t - T/2)) dt
//
// R_j is held at its midpoint value over each grid step and the exponential
// is integrated exactly across the step, which contributes the factor
// sinc(pi f dt) to every step weight.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "propagation.hpp"

namespace ffkit {

namespace detail {
inline double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}
}  // namespace detail

/// int over step k of exp(i 2 pi f (t - T/2)) dt, with T the grid total.
inline cplx step_weight(const TimeGrid& grid, double f, std::size_t k) noexcept {
  const double arg = 2.0 * std::numbers::pi * f * (grid.midpoint(k) - 0.5 * grid.total());
  return std::polar(grid.dt * detail::sinc(std::numbers::pi * f * grid.dt), arg);
}

inline CPauliVec filter_function(const RotationTrace& rot, double f) {
  CPauliVec acc;
  for (std::size_t k = 0; k < rot.midpoints.size(); ++k) {
    const cplx w = step_weight(rot.grid, f, k);
    const PauliVec& r = rot.midpoints[k];
    acc.x += r.x * w;
    acc.y += r.y * w;
    acc.z += r.z * w;
  }
  return acc * cplx(1.0 / rot.total_time());
}

struct FilterFunctionSweep {
  Axis axis = Axis::z;
  double total_time = 0.0;
  std::vector<double> frequencies;
  std::vector<CPauliVec> values;

  std::size_t size() const noexcept { return frequencies.size(); }
};

/// Uniform frequency grid fmin, fmin+df, ..., <= fmax (inclusive within rounding).
inline std::vector<double> frequency_grid(double fmin, double fmax, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) throw ValidationError("frequency step must be positive");
  if (fmin < 0.0) throw ValidationError("frequencies must be non-negative");
  if (fmin > fmax) throw ValidationError("fmin exceeds fmax");
  const auto n = static_cast<std::size_t>(std::floor((fmax - fmin) / df + 1e-9)) + 1;
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = fmin + static_cast<double>(k) * df;
  return f;
}

inline FilterFunctionSweep sweep(const RotationTrace& rot, std::vector<double> f_grid, unsigned threads = 1) {
  if (f_grid.empty()) throw ValidationError("sweep: empty frequency grid");
  for (std::size_t k = 0; k < f_grid.size(); ++k) {
    if (!(f_grid[k] >= 0.0)) throw ValidationError("sweep: frequencies must be non-negative");
    if (k > 0 && !(f_grid[k] > f_grid[k - 1])) throw ValidationError("sweep: frequencies must be increasing");
  }
  FilterFunctionSweep s{rot.axis, rot.total_time(), std::move(f_grid), {}};
  s.values.resize(s.frequencies.size());
  parallel_for(s.frequencies.size(), threads, [&](std::size_t k) { s.values[k] = filter_function(rot, s.frequencies[k]); });
  return s;
}

inline constexpr double kPhaseMagnitudeFloor = 1e-12;

/// arg(F_ij) in degrees, in (-180, 180].
inline double phase_deg(const cplx& value) {
  if (std::abs(value) <= kPhaseMagnitudeFloor) throw UndefinedPhaseError("phase undefined below magnitude 1e-12");
  double p = std::arg(value) * 180.0 / std::numbers::pi;
  if (p <= -180.0) p += 360.0;
  return p;
}

inline double phase_deg(const CPauliVec& value, Axis j) { return phase_deg(value[j]); }

/// Amplitude gain in dB, 20 log10 |F|.
inline double gain_db(double magnitude) noexcept { return 20.0 * std::log10(magnitude); }

// ---------------------------------------------------------------- switching function

struct SwitchingSegment {
  double duration = 0.0;
  int sign = 1;  // +1 or -1
};

/// |y~(fT)|^2 with y~ = (1/T) int y(t) exp(i 2 pi f (t - T/2)) dt.
inline double switching_ff(const std::vector<SwitchingSegment>& y, double f) {
  if (y.empty()) throw ValidationError("switching function: no segments");
  double T = 0.0;
  for (const auto& s : y) {
    if (!(s.duration > 0.0)) throw ValidationError("switching function: durations must be positive");
    if (s.sign != 1 && s.sign != -1) throw ValidationError("switching function: sign must be +1 or -1");
    T += s.duration;
  }
  const double w = 2.0 * std::numbers::pi * f;
  cplx acc{};
  double a = -0.5 * T;
  for (const auto& s : y) {
    const double b = a + s.duration;
    // int_a^b exp(i w u) du = exp(i w (a+b)/2) * (b-a) * sinc(w (b-a)/2)
    acc += static_cast<double>(s.sign) * std::polar(s.duration * detail::sinc(0.5 * w * s.duration), 0.5 * w * (a + b));
    a = b;
  }
  return std::norm(acc / T);
}

// ---------------------------------------------------------------- PSD overlap

struct PsdTable {
  std::vector<double> f;  // MHz, strictly increasing
  std::vector<double> s;  // S(f) >= 0

  void validate() const {
    if (f.size() != s.size()) throw ValidationError("psd: column length mismatch");
    if (f.size() < 2) throw ValidationError("psd: need at least two rows");
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (!(s[k] >= 0.0) || !std::isfinite(s[k])) throw ValidationError("psd: S(f) must be non-negative");
      if (k > 0 && !(f[k] > f[k - 1])) throw ValidationError("psd: frequencies must be strictly increasing");
    }
  }

  /// Linear interpolation; caller keeps f inside [f.front(), f.back()].
  double at(double x) const noexcept {
    const auto it = std::upper_bound(f.begin(), f.end(), x);
    if (it == f.begin()) return s.front();
    if (it == f.end()) return s.back();
    const auto k = static_cast<std::size_t>(it - f.begin());
    const double w = (x - f[k - 1]) / (f[k] - f[k - 1]);
    return s[k - 1] + w * (s[k] - s[k - 1]);
  }
};

struct Susceptibility {
  PauliVec per_component;  // chi_j, rad^2
  double total = 0.0;
  bool truncated = false;  // the sweep extends beyond the PSD table
};

namespace detail {
template <class GainFn>
Susceptibility overlap(const std::vector<double>& freqs, double T, const PsdTable& psd, GainFn&& gains) {
  psd.validate();
  Susceptibility out;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (freqs[k] >= psd.f.front() && freqs[k] <= psd.f.back())
      idx.push_back(k);
    else
      out.truncated = true;
  }
  if (idx.size() < 2) throw DomainError("psd overlap: fewer than two sweep frequencies inside the PSD range");
  for (std::size_t m = 0; m + 1 < idx.size(); ++m) {
    const std::size_t a = idx[m], b = idx[m + 1];
    const double h = freqs[b] - freqs[a];
    const PauliVec ga = gains(a) * psd.at(freqs[a]);
    const PauliVec gb = gains(b) * psd.at(freqs[b]);
    out.per_component += 0.5 * h * (ga + gb);
  }
  out.per_component *= T * T;
  out.total = out.per_component.x + out.per_component.y + out.per_component.z;
  return out;
}
}  // namespace detail

/// chi = T^2 int S(f) sum_j |F_ij(f)|^2 df (trapezoid over sweep frequencies inside the table).
inline Susceptibility psd_overlap(const FilterFunctionSweep& sweep, const PsdTable& psd) {
  return detail::overlap(sweep.frequencies, sweep.total_time, psd, [&](std::size_t k) {
    const auto& v = sweep.values[k];
    return PauliVec{std::norm(v.x), std::norm(v.y), std::norm(v.z)};
  });
}

/// Same overlap for conventional switching-function gains (reported in the z slot).
inline Susceptibility psd_overlap(const std::vector<double>& freqs, const std::vector<double>& gains, double T,
                                  const PsdTable& psd) {
  if (freqs.size() != gains.size()) throw ValidationError("psd overlap: gains/frequency length mismatch");
  return detail::overlap(freqs, T, psd, [&](std::size_t k) { return PauliVec{0.0, 0.0, gains[k]}; });
}

}  // namespace ffkit
