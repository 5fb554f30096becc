#pragma once

// Synchronous control parameters from filter-function peaks.
//
// A tone delta_beta cos(2 pi f (t - T/2) + phi) on the perturbation axis
// produces the first-order rotation vector delta_beta T Re[exp(i phi) F(f, T)].
// Choosing phi = -arg F_ij puts the full gain |F_ij| on axis j.

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "filter_function.hpp"
#include "propagation.hpp"

namespace ffkit {

inline constexpr double kCleanPurity = 0.9;

struct ControlSolution {
  double frequency = 0.0;  // MHz
  double phase_deg = 0.0;  // arg F_ij at `frequency`, referenced to the centre of reference_time
  Axis axis = Axis::z;
  double gain = 0.0;  // |F_ij|
  int harmonic_index = 0;
  double purity = 0.0;          // gain / sqrt(sum_j |F_ij|^2)
  double reference_time = 0.0;  // duration of the sweep the peak came from, us

  bool clean() const noexcept { return purity >= kCleanPurity; }

  void validate() const {
    if (!(gain > 0.0) || gain > 1.0 + 1e-9) throw ValidationError("control solution: gain must be in (0, 1]");
    if (!(purity > 0.0) || purity > 1.0 + 1e-9) throw ValidationError("control solution: purity must be in (0, 1]");
    if (!(phase_deg > -180.0) || phase_deg > 180.0) throw ValidationError("control solution: phase out of range");
  }
};

struct PeakOptions {
  double min_gain = 0.1;
  double base_freq = 0.0;             // 0: no harmonic labelling
  double harmonic_tolerance = 0.05;   // |f / f_base - n| allowed for a harmonic label
};

namespace detail {
inline int harmonic_of(double f, const PeakOptions& o) noexcept {
  if (o.base_freq <= 0.0) return 0;
  const double r = f / o.base_freq;
  const double n = std::round(r);
  return (n >= 1.0 && std::abs(r - n) <= o.harmonic_tolerance) ? static_cast<int>(n) : 0;
}

inline bool ranks_before(const ControlSolution& a, const ControlSolution& b) noexcept {
  return std::tuple(-a.gain, a.frequency, index(a.axis)) < std::tuple(-b.gain, b.frequency, index(b.axis));
}
}  // namespace detail

/// Local maxima of each |F_ij(f)| above min_gain, refined by three-point
/// parabolic interpolation. With `rot`, the value at the refined frequency is
/// recomputed exactly; otherwise it is interpolated from the neighbours.
inline std::vector<ControlSolution> find_peaks(const FilterFunctionSweep& sweep, const PeakOptions& opts,
                                               const RotationTrace* rot = nullptr) {
  if (sweep.size() == 0) throw DomainError("find_peaks: empty sweep");
  if (!(opts.min_gain > 0.0 && opts.min_gain < 1.0)) throw ValidationError("find_peaks: min_gain must be in (0, 1)");
  const std::size_t n = sweep.size();
  std::vector<ControlSolution> out;
  for (int j = 0; j < 3; ++j) {
    auto mag = [&](std::size_t k) { return std::abs(sweep.values[k][j]); };
    for (std::size_t k = 0; k < n; ++k) {
      const double m0 = mag(k);
      if (m0 < opts.min_gain) continue;
      const bool left_ok = k == 0 || m0 > mag(k - 1);
      const bool right_ok = k + 1 == n || m0 >= mag(k + 1);
      if (!left_ok || !right_ok || n == 1) continue;

      double f = sweep.frequencies[k];
      CPauliVec value = sweep.values[k];
      double gain = m0;
      if (k > 0 && k + 1 < n) {
        const double ml = mag(k - 1), mr = mag(k + 1);
        const double denom = ml - 2.0 * m0 + mr;
        double p = denom < 0.0 ? 0.5 * (ml - mr) / denom : 0.0;
        p = std::clamp(p, -0.5, 0.5);
        const std::size_t nb = p < 0.0 ? k - 1 : k + 1;
        const double w = std::abs(p);
        f = sweep.frequencies[k] + w * (sweep.frequencies[nb] - sweep.frequencies[k]);
        if (rot) {
          value = filter_function(*rot, f);
          gain = std::abs(value[j]);
        } else {
          const auto& vn = sweep.values[nb];
          for (int c = 0; c < 3; ++c) value[c] = (1.0 - w) * sweep.values[k][c] + w * vn[c];
          gain = m0 - 0.25 * (ml - mr) * p;
        }
      }
      ControlSolution s;
      s.frequency = f;
      s.axis = static_cast<Axis>(j);
      s.gain = gain;
      s.phase_deg = phase_deg(value[j]);
      const double total = norm(value);
      s.purity = total > 0.0 ? std::min(1.0, std::abs(value[j]) / total) : 0.0;
      s.harmonic_index = detail::harmonic_of(f, opts);
      s.reference_time = sweep.total_time;
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(), detail::ranks_before);
  return out;
}

/// Pair of solutions on distinct axes maximising the smaller gain; ties go
/// to the lower total frequency. The pair is returned in frequency order.
inline std::pair<ControlSolution, ControlSolution> select_two_axis(const std::vector<ControlSolution>& solutions) {
  std::optional<std::pair<ControlSolution, ControlSolution>> best;
  auto key = [](const ControlSolution& a, const ControlSolution& b) {
    return std::tuple(-std::min(a.gain, b.gain), a.frequency + b.frequency, a.frequency, index(a.axis), b.frequency,
                      index(b.axis), -std::max(a.gain, b.gain));
  };
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    for (std::size_t k = i + 1; k < solutions.size(); ++k) {
      ControlSolution a = solutions[i], b = solutions[k];
      if (a.axis == b.axis) continue;
      if (std::tuple(b.frequency, index(b.axis)) < std::tuple(a.frequency, index(a.axis))) std::swap(a, b);
      if (!best || key(a, b) < key(best->first, best->second)) best = std::pair(a, b);
    }
  }
  if (!best) throw ControllabilityError("no pair of solutions on non-parallel axes");
  return *best;
}

struct ControlSynthesis {
  double delta_beta = 0.0;  // rad/us
  int n_periods = 0;
  double control_phase_deg = 0.0;  // phi of the tone over n_periods * T_drive
  double total_time = 0.0;         // us
};

/// Phase of F_ij at a harmonic frequency when the sequence is re-centred on
/// a different total duration of the same periodic drive.
inline double recentre_phase_deg(double phase_deg, double f, double from_time, double to_time) noexcept {
  double p = phase_deg + 180.0 * f * (from_time - to_time);
  p = std::fmod(p, 360.0);
  if (p <= -180.0) p += 360.0;
  if (p > 180.0) p -= 360.0;
  return p;
}

/// Smallest whole number of drive periods for which the tone amplitude
///   delta_beta = theta / (2 n T_drive gain)
/// stays within 5% of the peak drive amplitude. The factor 2 converts the su(2)
/// coefficient to a Bloch rotation angle.
inline ControlSynthesis synthesize_control(const ControlSolution& sol, double theta, double t_drive,
                                           double max_drive_amplitude) {
  sol.validate();
  if (!(theta > 0.0) || theta > std::numbers::pi) throw ValidationError("synthesize: theta must be in (0, pi]");
  if (!(t_drive > 0.0)) throw ValidationError("synthesize: drive period must be positive");
  const double limit = 0.05 * max_drive_amplitude;
  for (int n = 1; n <= 10000; ++n) {
    const double db = theta / (2.0 * n * t_drive * sol.gain);
    if (db <= limit) {
      const double total = n * t_drive;
      double phi = -recentre_phase_deg(sol.phase_deg, sol.frequency, sol.reference_time, total);
      if (phi <= -180.0) phi += 360.0;
      return {db, n, phi, total};
    }
  }
  throw AmplitudeLimitError("synthesize: weak-control guard unsatisfiable within 1e4 periods");
}

}  // namespace ffkit
