#pragma once

// Space curves: time-resolved accumulation of the perturbation direction,
//   r_j(t) = int_0^t R_j(s) cos(2 pi f (s - T/2) + phi) ds,
// whose endpoint is T Re[exp(i phi) F_ij(f, T)].

#include <cmath>
#include <numbers>
#include <vector>

#include "filter_function.hpp"
#include "propagation.hpp"

namespace ffkit {

struct SpaceCurve {
  TimeGrid grid;
  double f = 0.0;
  double phi_deg = 0.0;
  std::vector<PauliVec> points;  // r(t_k), k = 0..n_steps, us

  const PauliVec& endpoint() const noexcept { return points.back(); }
};

inline double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }

inline SpaceCurve space_curve(const RotationTrace& rot, double f, double phi_deg) {
  SpaceCurve c{rot.grid, f, phi_deg, {}};
  c.points.reserve(rot.midpoints.size() + 1);
  const cplx rotor = std::polar(1.0, deg_to_rad(phi_deg));
  PauliVec r;
  c.points.push_back(r);
  for (std::size_t k = 0; k < rot.midpoints.size(); ++k) {
    // Same step weight as the filter function, so the endpoint identity is exact.
    const double w = (rotor * step_weight(rot.grid, f, k)).real();
    r += rot.midpoints[k] * w;
    c.points.push_back(r);
  }
  return c;
}

/// T Re[exp(i phi) F(f, T)]
inline PauliVec predicted_endpoint(const CPauliVec& F, double T, double phi_deg) noexcept {
  const cplx rotor = std::polar(T, deg_to_rad(phi_deg));
  return (F * rotor).real();
}

/// || r(T) - T Re[exp(i phi) F(f, T)] ||
inline double curve_ff_consistency(const RotationTrace& rot, double f, double phi_deg) {
  const SpaceCurve c = space_curve(rot, f, phi_deg);
  const PauliVec predicted = predicted_endpoint(filter_function(rot, f), rot.total_time(), phi_deg);
  return norm(c.endpoint() - predicted);
}

/// Closed curve (first-order cancellation): ||r(T)|| <= 1e-6 T.
inline bool closure_test(const SpaceCurve& curve) noexcept {
  return norm(curve.endpoint()) <= 1e-6 * curve.grid.total();
}

inline double arc_length(const SpaceCurve& curve) noexcept {
  double len = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) len += norm(curve.points[k] - curve.points[k - 1]);
  return len;
}

}  // namespace ffkit
