#pragma once

// Midpoint-exponential propagation of the drive Hamiltonian and the
// interaction-frame rotation of the perturbation axis.

#include <cmath>
#include <limits>
#include <vector>

#include "drive.hpp"
#include "pauli.hpp"

namespace ffkit {

struct PropagatorTrace {
  TimeGrid grid;
  std::vector<Envelope> samples;          // held drive per step (midpoint sample)
  std::vector<Mat2c> unitaries;           // U(t_k), k = 0..n_steps
  std::vector<Mat2c> midpoint_unitaries;  // U(t_{k+1/2}), k = 0..n_steps-1

  const Mat2c& final() const noexcept { return unitaries.back(); }
};

/// Generator of one held step: exp(-i dt (wi sx + wq sy)).
inline PauliVec step_generator(const Envelope& e, double dt) noexcept { return {dt * e.omega_i, dt * e.omega_q, 0.0}; }

inline PropagatorTrace propagate_samples(std::vector<Envelope> samples, const TimeGrid& grid) {
  grid.validate();
  PropagatorTrace tr{grid, std::move(samples), {}, {}};
  const std::size_t n = grid.n_steps;
  tr.unitaries.reserve(n + 1);
  tr.midpoint_unitaries.reserve(n);
  Mat2c u = Mat2c::identity();
  tr.unitaries.push_back(u);
  for (std::size_t k = 0; k < n; ++k) {
    const Envelope& e = tr.samples[k];
    tr.midpoint_unitaries.push_back(su2_exp(step_generator(e, 0.5 * grid.dt)) * u);
    u = su2_exp(step_generator(e, grid.dt)) * u;
    tr.unitaries.push_back(u);
  }
  return tr;
}

/// U(t_{k+1}) = exp(-i dt H(t_{k+1/2})) U(t_k), U(0) = I.
inline PropagatorTrace propagate(const DriveSpec& spec, const TimeGrid& grid) {
  return propagate_samples(sample_envelope(spec, grid), grid);
}

/// End unitary only, without storing the trace.
inline Mat2c propagate_final(const std::vector<Envelope>& samples, double dt) noexcept {
  Mat2c u = Mat2c::identity();
  for (const auto& e : samples) u = su2_exp(step_generator(e, dt)) * u;
  return u;
}

struct RotationTrace {
  TimeGrid grid;
  Axis axis = Axis::z;
  std::vector<PauliVec> rows;       // R(t_k), k = 0..n_steps
  std::vector<PauliVec> midpoints;  // R(t_{k+1/2}), k = 0..n_steps-1

  double total_time() const noexcept { return grid.total(); }
};

/// R_j = Tr(U^dag sigma_i U sigma_j) / 2
inline PauliVec rotation_row(const Mat2c& u, Axis axis) noexcept {
  const Mat2c b = u.adjoint() * pauli::sigma(axis) * u;
  return pauli_decompose(b).c.real();
}

inline RotationTrace rotation_trace(const PropagatorTrace& trace, Axis axis) {
  RotationTrace r{trace.grid, axis, {}, {}};
  r.rows.reserve(trace.unitaries.size());
  r.midpoints.reserve(trace.midpoint_unitaries.size());
  for (const auto& u : trace.unitaries) r.rows.push_back(rotation_row(u, axis));
  for (const auto& u : trace.midpoint_unitaries) r.midpoints.push_back(rotation_row(u, axis));
  r.rows.front() = PauliVec::unit(axis);
  return r;
}

inline RotationTrace rotation_trace(const DriveSpec& spec, const TimeGrid& grid, Axis axis) {
  return rotation_trace(propagate(spec, grid), axis);
}

/// Observed order of the endpoint unitary from grids n/2, n, 2n. Returns
/// +infinity when the coarse difference is already at the rounding floor
/// (e.g. constant or grid-aligned piecewise drives, which propagate exactly).
inline double convergence_check(const DriveSpec& spec, const TimeGrid& grid) {
  grid.validate();
  if (grid.n_steps % 2 != 0) throw ValidationError("convergence check needs an even step count");
  const double T = grid.total();
  auto end_at = [&](std::size_t n) {
    const TimeGrid g{T / static_cast<double>(n), n};
    return propagate_final(sample_envelope(spec, g), g.dt);
  };
  const Mat2c coarse = end_at(grid.n_steps / 2);
  const Mat2c mid = end_at(grid.n_steps);
  const Mat2c fine = end_at(grid.n_steps * 2);
  const double e1 = max_abs_diff(coarse, mid);
  const double e2 = max_abs_diff(mid, fine);
  constexpr double floor = 1e-13;
  if (e1 < floor || e2 < floor * 1e-3) return std::numeric_limits<double>::infinity();
  return std::log2(e1 / e2);
}

}  // namespace ffkit
