#pragma once

// Search for harmonic drives whose interaction-frame Magnus terms vanish to
// order K, by restarted Nelder-Mead over the harmonic amplitudes.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "drive.hpp"
#include "errors.hpp"
#include "magnus.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "propagation.hpp"

namespace ffkit {

enum class Parameterization { raw, spherical };

struct OptimizerConfig {
  std::vector<int> harmonics{1};
  int order = 1;                // K
  std::vector<double> weights;  // w_1..w_K, default all 1
  Parameterization parameterization = Parameterization::raw;
  std::size_t max_evals = 20000;  // per restart
  int restarts = 5;
  std::uint64_t seed = 1;
  double base_freq = 1.0;  // MHz; T = 1 / base_freq
  std::size_t steps_per_period = kDefaultStepsPerPeriod;
  // Box for random initial points. Amplitude-like entries are in units of
  // pi / T (so a single cosine has modulation index equal to the value).
  std::vector<double> init_lo;
  std::vector<double> init_hi;
  unsigned threads = 1;

  std::size_t dimension() const noexcept {
    return parameterization == Parameterization::spherical ? 3 : harmonics.size();
  }

  double weight(int k) const noexcept {
    return weights.empty() ? 1.0 : weights[static_cast<std::size_t>(k - 1)];
  }

  void validate() const {
    if (order < 1) throw ValidationError("optimizer: order must be at least 1");
    if (max_evals < 100) throw ValidationError("optimizer: budget must be at least 100 evaluations");
    if (restarts < 1) throw ValidationError("optimizer: restarts must be at least 1");
    if (harmonics.empty()) throw ValidationError("optimizer: no harmonics");
    for (int h : harmonics)
      if (h < 1) throw ValidationError("optimizer: harmonic indices must be >= 1");
    if (parameterization == Parameterization::spherical && harmonics.size() != 3)
      throw ValidationError("optimizer: spherical parameterization needs exactly three harmonics");
    if (!weights.empty()) {
      if (weights.size() != static_cast<std::size_t>(order))
        throw ValidationError("optimizer: need one weight per order");
      for (double w : weights)
        if (!(w > 0.0)) throw ValidationError("optimizer: weights must be positive");
    }
    if (!(base_freq > 0.0)) throw ValidationError("optimizer: base_freq must be positive");
    const std::size_t d = dimension();
    if (!init_lo.empty() || !init_hi.empty()) {
      if (init_lo.size() != d || init_hi.size() != d)
        throw ValidationError("optimizer: init_lo/init_hi must have " + std::to_string(d) + " entries");
      for (std::size_t i = 0; i < d; ++i)
        if (!(init_lo[i] <= init_hi[i])) throw ValidationError("optimizer: init_lo must not exceed init_hi");
    }
  }

  std::vector<double> lower() const {
    if (!init_lo.empty()) return init_lo;
    if (parameterization == Parameterization::spherical) return {-8.0, -std::numbers::pi / 2, -std::numbers::pi};
    return std::vector<double>(harmonics.size(), -4.0);
  }
  std::vector<double> upper() const {
    if (!init_hi.empty()) return init_hi;
    if (parameterization == Parameterization::spherical) return {8.0, std::numbers::pi / 2, std::numbers::pi};
    return std::vector<double>(harmonics.size(), 4.0);
  }
};

/// One base period of the drive described by `params`. Amplitude entries are
/// in units of pi / T.
inline HarmonicSeries drive_from_params(const std::vector<double>& params, const OptimizerConfig& cfg) {
  const double unit = std::numbers::pi * cfg.base_freq;
  HarmonicSeries h{cfg.base_freq, 1, {}};
  if (cfg.parameterization == Parameterization::spherical) {
    const auto s = three_harmonic_shape(params.at(1), params.at(2));
    for (std::size_t k = 0; k < 3; ++k) h.terms.push_back({cfg.harmonics[k], params[0] * unit * s[k], 0.0});
  } else {
    for (std::size_t k = 0; k < cfg.harmonics.size(); ++k) h.terms.push_back({cfg.harmonics[k], params.at(k) * unit, 0.0});
  }
  return h;
}

struct ObjectiveBreakdown {
  double value = 0.0;
  std::vector<double> scaled_norms;  // ||A_k|| / T^k
  MagnusSeries series;
};

inline ObjectiveBreakdown objective_breakdown(const HarmonicSeries& drive, const OptimizerConfig& cfg) {
  const TimeGrid grid = make_grid(drive, cfg.steps_per_period);
  ObjectiveBreakdown out;
  out.series = magnus_taylor(rotation_trace(drive, grid, Axis::z), cfg.order);
  for (int k = 1; k <= cfg.order; ++k) {
    const double s = out.series.scaled_norm(static_cast<std::size_t>(k));
    out.scaled_norms.push_back(s);
    out.value += cfg.weight(k) * s * s;
  }
  return out;
}

/// sum_k w_k ||A_k||^2 / T^(2k) over one base period.
inline double objective(const std::vector<double>& params, const OptimizerConfig& cfg) {
  return objective_breakdown(drive_from_params(params, cfg), cfg).value;
}

inline constexpr double kConvergedObjective = 1e-8;

struct OptimizerResult {
  std::vector<double> params;
  double objective = 0.0;
  std::vector<double> scaled_norms;
  std::size_t evaluations = 0;
  bool converged = false;
  int best_restart = 0;
  HarmonicSeries drive;
};

inline OptimizerResult optimize(const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dimension();
  const auto lo = cfg.lower();
  const auto hi = cfg.upper();
  std::vector<double> steps(d);
  for (std::size_t i = 0; i < d; ++i) steps[i] = hi[i] > lo[i] ? 0.1 * (hi[i] - lo[i]) : 0.1;

  auto f = [&](const std::vector<double>& x) {
    try {
      const double v = objective(x, cfg);
      return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::max();
    }
  };

  std::vector<NelderMeadResult> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    std::mt19937_64 rng(cfg.seed + 0x9E3779B97F4A7C15ULL * r);
    std::vector<double> x0(d);
    for (std::size_t i = 0; i < d; ++i) {
      // uniform in [lo, hi) from 53 random bits; avoids distribution differences between standard libraries
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x0[i] = lo[i] + u * (hi[i] - lo[i]);
    }
    NelderMeadOptions o;
    o.max_evals = cfg.max_evals;
    o.f_target = 1e-26;
    runs[r] = nelder_mead(f, x0, steps, o);
  });

  OptimizerResult out;
  std::size_t best = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.evaluations += runs[r].evals;
    if (runs[r].f < runs[best].f) best = r;
  }
  out.params = runs[best].x;
  out.best_restart = static_cast<int>(best);
  out.drive = drive_from_params(out.params, cfg);
  const auto bd = objective_breakdown(out.drive, cfg);
  out.objective = bd.value;
  out.scaled_norms = bd.scaled_norms;
  out.converged = out.objective <= kConvergedObjective;
  return out;
}

}  // namespace ffkit
