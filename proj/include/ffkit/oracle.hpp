#pragma once

// Brute-force reference: propagate H_drive(t) + delta_beta cos(2 pi f (t - T/2) + phi) sigma_i
// with the same held-midpoint stepper as the drive and compare against the
// first-order and Magnus predictions.

#include <cmath>
#include <numbers>

#include "drive.hpp"
#include "filter_function.hpp"
#include "geometric.hpp"
#include "magnus.hpp"
#include "pauli.hpp"
#include "propagation.hpp"

namespace ffkit {

struct PerturbationSpec {
  Axis axis = Axis::z;
  double delta_beta = 0.0;  // rad/us
  double f = 0.0;           // MHz
  double phi_deg = 0.0;     // referenced to the sequence centre
};

/// Interaction-frame end propagator V = U_drive(T)^dag U_full(T).
inline Mat2c simulate_full(const std::vector<Envelope>& samples, const PerturbationSpec& p, const TimeGrid& grid) {
  if (!std::isfinite(p.delta_beta)) throw ValidationError("perturbation: delta_beta must be finite");
  const double T = grid.total();
  const double phi = deg_to_rad(p.phi_deg);
  Mat2c u_drive = Mat2c::identity();
  Mat2c u_full = Mat2c::identity();
  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    const PauliVec g = step_generator(samples[k], grid.dt);
    PauliVec gp = g;
    gp[p.axis] += grid.dt * p.delta_beta * std::cos(2.0 * std::numbers::pi * p.f * (grid.midpoint(k) - 0.5 * T) + phi);
    u_drive = su2_exp(g) * u_drive;
    u_full = su2_exp(gp) * u_full;
  }
  return u_drive.adjoint() * u_full;
}

inline Mat2c simulate_full(const DriveSpec& spec, const PerturbationSpec& p, const TimeGrid& grid) {
  return simulate_full(sample_envelope(spec, grid), p, grid);
}

/// Rotation vector a with V = exp(-i a.sigma) (Bloch rotation angle 2|a|).
inline PauliVec realized_rotation(const Mat2c& v) {
  const Su2Log lg = su2_log(v);
  if (2.0 * std::abs(lg.half_angle) >= kBranchLimit) throw BranchRiskError("rotation angle too close to pi for log");
  return lg.coeffs.real();
}

struct FirstOrderCheck {
  PauliVec realized;
  PauliVec predicted;
  double residual = 0.0;
};

inline FirstOrderCheck first_order_check(const DriveSpec& spec, const PerturbationSpec& p, const TimeGrid& grid) {
  const double T = grid.total();
  if (std::abs(p.delta_beta) * T > 0.1 + 1e-12)
    throw ValidationError("first-order check requires |delta_beta| T <= 0.1 rad");
  const auto samples = sample_envelope(spec, grid);
  FirstOrderCheck out;
  out.realized = realized_rotation(simulate_full(samples, p, grid));
  const RotationTrace rot = rotation_trace(propagate_samples(samples, grid), p.axis);
  out.predicted = p.delta_beta * predicted_endpoint(filter_function(rot, p.f), T, p.phi_deg);
  out.residual = norm(out.realized - out.predicted);
  return out;
}

/// || a - delta_beta T Re[exp(i phi) F_i(f, T)] ||
inline double first_order_residual(const DriveSpec& spec, const PerturbationSpec& p, const TimeGrid& grid) {
  return first_order_check(spec, p, grid).residual;
}

/// Operator-norm distance between the truncated Magnus series and the
/// brute-force interaction-frame propagator at quasistatic strength delta.
inline double series_residual(const MagnusSeries& series, const DriveSpec& spec, const TimeGrid& grid, double delta) {
  if (std::abs(delta) * grid.total() > 0.5 + 1e-12) throw ValidationError("series residual requires |delta| T <= 0.5");
  const Mat2c exact = simulate_full(spec, {series.axis, delta, 0.0, 0.0}, grid);
  return operator_norm(exact - series_propagator(series, delta));
}

/// Angle in degrees between two vectors (0 for a zero vector).
inline double angle_between_deg(const PauliVec& a, const PauliVec& b) noexcept {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace ffkit
