#pragma once

// Driving-field envelopes for the rotating-frame Hamiltonian
//   H_drive(t) = omega_i(t) sx + omega_q(t) sy.
// Units: time in us, frequency in MHz, amplitudes in rad/us. A constant
// amplitude W on sx rotates the Bloch vector by 2 W t, so a Rabi frequency
// f_R corresponds to W = pi f_R.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace ffkit {

struct Envelope {
  double omega_i = 0.0;
  double omega_q = 0.0;
  friend bool operator==(const Envelope&, const Envelope&) = default;
};

struct Segment {
  double duration = 0.0;
  double omega_i = 0.0;
  double omega_q = 0.0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct PiecewiseConstant {
  std::vector<Segment> segments;
  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;
};

struct HarmonicTerm {
  int n = 1;
  double amp_i = 0.0;
  double amp_q = 0.0;
  friend bool operator==(const HarmonicTerm&, const HarmonicTerm&) = default;
};

/// sum_n amp * cos(2 pi n f_base t) on each quadrature, over `periods` base periods.
struct HarmonicSeries {
  double base_freq = 1.0;
  int periods = 1;
  std::vector<HarmonicTerm> terms;
  friend bool operator==(const HarmonicSeries&, const HarmonicSeries&) = default;
};

/// Cell-centred samples: sample m sits at (m + 1/2) dt, total duration N dt.
/// Values between centres are linearly interpolated; the outer half cells
/// hold the first/last sample.
struct Sampled {
  double dt = 0.0;
  std::vector<Envelope> samples;
  friend bool operator==(const Sampled&, const Sampled&) = default;
};

using DriveSpec = std::variant<PiecewiseConstant, HarmonicSeries, Sampled>;

struct TimeGrid {
  double dt = 0.0;
  std::size_t n_steps = 0;

  double t(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
  double midpoint(std::size_t k) const noexcept { return (static_cast<double>(k) + 0.5) * dt; }
  double total() const noexcept { return static_cast<double>(n_steps) * dt; }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time grid: dt must be positive");
    if (n_steps < 1) throw ValidationError("time grid: n_steps must be at least 1");
  }
};

inline double duration(const DriveSpec& spec) {
  struct {
    double operator()(const PiecewiseConstant& p) const {
      double t = 0.0;
      for (const auto& s : p.segments) t += s.duration;
      return t;
    }
    double operator()(const HarmonicSeries& h) const { return h.periods / h.base_freq; }
    double operator()(const Sampled& s) const { return s.dt * static_cast<double>(s.samples.size()); }
  } v;
  return std::visit(v, spec);
}

inline void validate(const DriveSpec& spec) {
  struct {
    void operator()(const PiecewiseConstant& p) const {
      if (p.segments.empty()) throw ValidationError("piecewise drive: no segments");
      for (std::size_t k = 0; k < p.segments.size(); ++k) {
        const auto& s = p.segments[k];
        if (!(s.duration > 0.0) || !std::isfinite(s.duration))
          throw ValidationError("piecewise drive: segment " + std::to_string(k) + " field 'duration' must be positive");
        if (!std::isfinite(s.omega_i) || !std::isfinite(s.omega_q))
          throw ValidationError("piecewise drive: segment " + std::to_string(k) + " amplitude not finite");
      }
    }
    void operator()(const HarmonicSeries& h) const {
      if (!(h.base_freq > 0.0) || !std::isfinite(h.base_freq))
        throw ValidationError("harmonic drive: field 'base_freq' must be positive");
      if (h.periods < 1) throw ValidationError("harmonic drive: field 'periods' must be a positive integer");
      std::set<int> seen;
      for (const auto& t : h.terms) {
        if (t.n < 1) throw ValidationError("harmonic drive: harmonic index must be >= 1");
        if (!seen.insert(t.n).second)
          throw ValidationError("harmonic drive: duplicate harmonic index " + std::to_string(t.n));
        if (!std::isfinite(t.amp_i) || !std::isfinite(t.amp_q))
          throw ValidationError("harmonic drive: amplitude not finite");
      }
    }
    void operator()(const Sampled& s) const {
      if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw ValidationError("sampled drive: field 'dt' must be positive");
      if (s.samples.empty()) throw ValidationError("sampled drive: no samples");
      for (const auto& e : s.samples)
        if (!std::isfinite(e.omega_i) || !std::isfinite(e.omega_q))
          throw ValidationError("sampled drive: sample not finite");
    }
  } v;
  std::visit(v, spec);
}

/// Envelope value at time t (no duration check).
inline Envelope envelope_at(const DriveSpec& spec, double t) {
  struct {
    double t;
    Envelope operator()(const PiecewiseConstant& p) const {
      double start = 0.0;
      for (const auto& s : p.segments) {
        if (t < start + s.duration) return {s.omega_i, s.omega_q};
        start += s.duration;
      }
      return {p.segments.back().omega_i, p.segments.back().omega_q};
    }
    Envelope operator()(const HarmonicSeries& h) const {
      Envelope e;
      for (const auto& term : h.terms) {
        const double c = std::cos(2.0 * std::numbers::pi * term.n * h.base_freq * t);
        e.omega_i += term.amp_i * c;
        e.omega_q += term.amp_q * c;
      }
      return e;
    }
    Envelope operator()(const Sampled& s) const {
      const double u = t / s.dt - 0.5;
      const auto n = s.samples.size();
      if (u <= 0.0) return s.samples.front();
      const auto m = static_cast<std::size_t>(std::floor(u));
      if (m + 1 >= n) return s.samples.back();
      const double w = u - static_cast<double>(m);
      const auto& a = s.samples[m];
      const auto& b = s.samples[m + 1];
      return {a.omega_i + w * (b.omega_i - a.omega_i), a.omega_q + w * (b.omega_q - a.omega_q)};
    }
  } v{t};
  return std::visit(v, spec);
}

/// Midpoint samples (t_{k+1/2}) of the envelope on `grid`.
inline std::vector<Envelope> sample_envelope(const DriveSpec& spec, const TimeGrid& grid) {
  grid.validate();
  if (!std::holds_alternative<HarmonicSeries>(spec)) {
    const double T = duration(spec);
    if (grid.total() > T * (1.0 + 1e-12))
      throw DurationMismatchError("grid duration " + std::to_string(grid.total()) + " us exceeds drive duration " +
                                  std::to_string(T) + " us");
  }
  std::vector<Envelope> out(grid.n_steps);
  if (const auto* p = std::get_if<PiecewiseConstant>(&spec)) {
    // Sweep segments once; midpoints are increasing.
    std::size_t seg = 0;
    double end = p->segments[0].duration;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
      const double tm = grid.midpoint(k);
      while (tm >= end && seg + 1 < p->segments.size()) end += p->segments[++seg].duration;
      out[k] = {p->segments[seg].omega_i, p->segments[seg].omega_q};
    }
    return out;
  }
  for (std::size_t k = 0; k < grid.n_steps; ++k) out[k] = envelope_at(spec, grid.midpoint(k));
  return out;
}

inline double peak_amplitude(const std::vector<Envelope>& samples) noexcept {
  double m = 0.0;
  for (const auto& e : samples) m = std::max(m, std::hypot(e.omega_i, e.omega_q));
  return m;
}

// ---------------------------------------------------------------- grids

inline constexpr std::size_t kDefaultStepsPerPeriod = 2000;

/// Natural period of a drive: one base period for harmonic series; otherwise the
/// Rabi period pi / max|omega| of the strongest drive value, capped at the
/// sequence duration (the duration itself for an undriven sequence).
inline double natural_period(const DriveSpec& spec) {
  if (const auto* h = std::get_if<HarmonicSeries>(&spec)) return 1.0 / h->base_freq;
  double peak = 0.0;
  if (const auto* p = std::get_if<PiecewiseConstant>(&spec)) {
    for (const auto& s : p->segments) peak = std::max(peak, std::hypot(s.omega_i, s.omega_q));
  } else {
    for (const auto& e : std::get<Sampled>(spec).samples) peak = std::max(peak, std::hypot(e.omega_i, e.omega_q));
  }
  const double T = duration(spec);
  return peak > 0.0 ? std::min(T, std::numbers::pi / peak) : T;
}

namespace detail {
inline bool divides_all(const std::vector<double>& boundaries, double dt) {
  for (double b : boundaries) {
    const double q = b / dt;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) return false;
  }
  return true;
}
}  // namespace detail

/// Uniform grid over `total` (defaults to the drive duration) with about
/// `steps_per_period` steps per natural period. Piecewise grids are snapped so
/// every segment boundary inside [0, total] is a grid point.
inline TimeGrid make_grid(const DriveSpec& spec, std::size_t steps_per_period = kDefaultStepsPerPeriod,
                          std::optional<double> total = std::nullopt) {
  validate(spec);
  if (steps_per_period < 1) throw ValidationError("steps per period must be at least 1");
  const double T = total.value_or(duration(spec));
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("total time must be positive");
  const double period = natural_period(spec);
  const double target = std::max(1.0, std::round(static_cast<double>(steps_per_period) * T / period));

  if (const auto* p = std::get_if<PiecewiseConstant>(&spec)) {
    std::vector<double> boundaries;
    double acc = 0.0;
    for (const auto& s : p->segments) {
      acc += s.duration;
      if (acc < T * (1.0 - 1e-12)) boundaries.push_back(acc);
    }
    boundaries.push_back(T);
    const auto n0 = static_cast<std::size_t>(target);
    for (std::size_t n = n0; n <= 64 * n0; ++n) {
      const double dt = T / static_cast<double>(n);
      if (detail::divides_all(boundaries, dt)) return {dt, n};
    }
    throw ValidationError("piecewise drive: segment durations are not commensurate with any grid near " +
                          std::to_string(n0) + " steps");
  }
  if (const auto* s = std::get_if<Sampled>(&spec)) {
    const double per_sample = std::ceil(target / static_cast<double>(s->samples.size()));
    const double dt0 = s->dt / std::max(1.0, per_sample);
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(T / dt0)));
    return {T / static_cast<double>(n), n};
  }
  const auto n = static_cast<std::size_t>(target);
  return {T / static_cast<double>(n), n};
}

// ---------------------------------------------------------------- transforms

/// Same drive played `repeats` times back to back.
inline DriveSpec repeat(const DriveSpec& spec, int repeats) {
  if (repeats < 1) throw ValidationError("repeat count must be positive");
  struct {
    int r;
    DriveSpec operator()(const PiecewiseConstant& p) const {
      PiecewiseConstant out;
      for (int k = 0; k < r; ++k) out.segments.insert(out.segments.end(), p.segments.begin(), p.segments.end());
      return out;
    }
    DriveSpec operator()(HarmonicSeries h) const {
      h.periods *= r;
      return h;
    }
    DriveSpec operator()(const Sampled& s) const {
      Sampled out{s.dt, {}};
      for (int k = 0; k < r; ++k) out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
      return out;
    }
  } v{repeats};
  return std::visit(v, spec);
}

/// Piecewise drive cut at time t (the last segment is shortened).
inline PiecewiseConstant truncate(const PiecewiseConstant& p, double t) {
  if (!(t > 0.0)) throw ValidationError("truncation time must be positive");
  PiecewiseConstant out;
  double acc = 0.0;
  for (const auto& s : p.segments) {
    if (acc >= t * (1.0 - 1e-12)) break;
    Segment c = s;
    c.duration = std::min(s.duration, t - acc);
    out.segments.push_back(c);
    acc += c.duration;
  }
  if (acc < t * (1.0 - 1e-12)) throw DurationMismatchError("truncation time exceeds drive duration");
  return out;
}

// ---------------------------------------------------------------- builders

inline PiecewiseConstant build_constant(double omega_i, double omega_q, double duration_us) {
  PiecewiseConstant p{{{duration_us, omega_i, omega_q}}};
  validate(p);
  return p;
}

/// Free evolution tau/2, an x pi-pulse of length t_pi, free evolution tau/2.
inline PiecewiseConstant build_hahn_echo(double tau, double t_pi) {
  if (!(tau > 0.0) || !(t_pi > 0.0)) throw ValidationError("hahn echo: tau and t_pi must be positive");
  const double omega = std::numbers::pi / (2.0 * t_pi);
  return {{{tau / 2.0, 0.0, 0.0}, {t_pi, omega, 0.0}, {tau / 2.0, 0.0, 0.0}}};
}

/// Single-cosine modulated drive amplitude*cos(2 pi t / period) on the I quadrature.
inline HarmonicSeries build_cosine(double amplitude, double period, int periods) {
  if (!(period > 0.0)) throw ValidationError("cosine drive: period must be positive");
  HarmonicSeries h{1.0 / period, periods, {{1, amplitude, 0.0}}};
  validate(h);
  return h;
}

/// Unit-norm coefficients (cos g cos d, cos g sin d, sin g) of harmonics 1, 3, 5.
inline std::array<double, 3> three_harmonic_shape(double gamma, double delta) noexcept {
  return {std::cos(gamma) * std::cos(delta), std::cos(gamma) * std::sin(delta), std::sin(gamma)};
}

inline HarmonicSeries build_three_harmonic(double omega, double gamma, double delta, double f_base, int periods) {
  const auto h = three_harmonic_shape(gamma, delta);
  HarmonicSeries out{f_base, periods, {{1, omega * h[0], 0.0}, {3, omega * h[1], 0.0}, {5, omega * h[2], 0.0}}};
  validate(out);
  return out;
}

}  // namespace ffkit
