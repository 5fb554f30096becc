#pragma once

// Magnus terms of the interaction-frame propagator in powers of a
// quasistatic perturbation strength delta:
//   V(delta) = T exp(-i int delta B(t).sigma dt) = exp(-i sum_k delta^k A_k.sigma)
// where B(t) is the rotated perturbation axis (RotationTrace). B is held at
// its midpoint value over each grid step, the same discretisation the filter
// function uses, so A_1 is exactly the f = 0 space-curve endpoint.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "drive.hpp"
#include "errors.hpp"
#include "pauli.hpp"
#include "propagation.hpp"

namespace ffkit {

enum class MagnusMethod { quadrature, taylor };

struct MagnusSeries {
  Axis axis = Axis::z;
  double time = 0.0;
  std::vector<PauliVec> terms;  // A_1..A_K, units us^k
  MagnusMethod method = MagnusMethod::quadrature;

  std::size_t order() const noexcept { return terms.size(); }
  const PauliVec& operator[](std::size_t k) const { return terms.at(k - 1); }  // 1-based
  /// ||A_k|| / T^k
  double scaled_norm(std::size_t k) const { return norm((*this)[k]) / std::pow(time, static_cast<double>(k)); }
};

/// A_1 = int B dt (midpoint sum).
inline PauliVec first_order_term(const RotationTrace& rot) noexcept {
  PauliVec a;
  for (const auto& b : rot.midpoints) a += b;
  return a * rot.grid.dt;
}

namespace detail {
using Mat3 = std::array<std::array<double, 3>, 3>;

inline PauliVec mul(const Mat3& m, const PauliVec& v) noexcept {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

inline void add_outer(Mat3& m, const PauliVec& a, const PauliVec& b, double s) noexcept {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] += s * a[i] * b[j];
}
}  // namespace detail

/// Nested-commutator integrals up to third order, exact for the
/// step-held B(t), in one pass with running sums:
///   A_1 = int B
///   A_2 = int_{t2<t1} B(t1) x B(t2)
///   A_3 = (2/3) int_{t3<t2<t1} [B1 x (B2 x B3) + B3 x (B2 x B1)]
inline MagnusSeries magnus_quadrature(const RotationTrace& rot, int K) {
  if (K < 1 || K > 3) throw UnsupportedOrderError("magnus quadrature supports orders 1..3; use taylor extraction");
  const double h = rot.grid.dt;
  PauliVec S;   // int_0^t B
  PauliVec A2;  // running second-order integral
  detail::Mat3 M{};  // int_0^t B S^T
  PauliVec T1, T2;   // third-order pieces
  for (const auto& b : rot.midpoints) {
    const double bb = dot(b, b);
    const double sb = dot(S, b);
    if (K >= 3) {
      T1 += h * cross(b, A2) + 0.5 * h * h * cross(b, cross(b, S));
      T2 += h * detail::mul(M, b) + (0.5 * h * h * sb + h * h * h / 6.0 * bb) * b;
      T2 -= (0.5 * (h * dot(S, S) + h * h * sb + h * h * h / 3.0 * bb)) * b;
      detail::add_outer(M, b, S, h);
      detail::add_outer(M, b, b, 0.5 * h * h);
    }
    A2 += h * cross(b, S);
    S += h * b;
  }
  MagnusSeries out{rot.axis, rot.total_time(), {S}, MagnusMethod::quadrature};
  if (K >= 2) out.terms.push_back(A2);
  if (K >= 3) out.terms.push_back((2.0 / 3.0) * (T1 + T2));
  return out;
}

/// V(delta) for a complex strength: product of held interaction-frame steps.
inline Mat2c interaction_propagator(const RotationTrace& rot, cplx delta) noexcept {
  Mat2c v = Mat2c::identity();
  const cplx s = delta * rot.grid.dt;
  for (const auto& b : rot.midpoints) v = su2_exp(CPauliVec{s * b.x, s * b.y, s * b.z}) * v;
  return v;
}

inline constexpr double kBranchLimit = 0.9 * std::numbers::pi;  // on the Bloch angle 2|theta|

struct TaylorDiagnostics {
  double rho = 0.0;
  double residual = 0.0;  // |c_0| and imaginary parts of c_k rho^k
};

namespace detail {
inline MagnusSeries taylor_once(const RotationTrace& rot, int K, double rho, TaylorDiagnostics* diag) {
  const int M = 2 * K + 4;
  std::vector<CPauliVec> a(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    const cplx delta = std::polar(rho, 2.0 * std::numbers::pi * m / M);
    const Su2Log lg = su2_log(interaction_propagator(rot, delta));
    if (2.0 * std::abs(lg.half_angle) >= kBranchLimit)
      throw BranchRiskError("magnus taylor: Bloch angle near pi at rho = " + std::to_string(rho));
    a[static_cast<std::size_t>(m)] = lg.coeffs;
  }
  auto coeff = [&](int k) {
    CPauliVec c;
    for (int m = 0; m < M; ++m) c += a[static_cast<std::size_t>(m)] * std::polar(1.0, -2.0 * std::numbers::pi * k * m / M);
    return c * cplx(1.0 / M);  // = c_k rho^k
  };
  // a(0) = 0 and real strengths give real coefficients; both are violated only by
  // rounding or a log branch jump between circle points.
  double residual = norm(coeff(0));
  MagnusSeries out{rot.axis, rot.total_time(), {}, MagnusMethod::taylor};
  for (int k = 1; k <= K; ++k) {
    const CPauliVec ck = coeff(k);
    residual = std::max(residual, norm(ck.imag()));
    out.terms.push_back(ck.real() * std::pow(rho, -k));
  }
  if (residual > 1e-8) throw ConditioningError("magnus taylor: inversion residual " + std::to_string(residual));
  if (diag) *diag = {rho, residual};
  return out;
}
}  // namespace detail

/// Magnus terms A_1..A_K by sampling a(delta) = i log V(delta) on the circle
/// |delta| = rho at M = 2K+4 points and inverting the Taylor series by DFT.
/// rho defaults to 0.5/T: the DFT divides rounding noise by rho^k, so a small
/// circle loses the high orders, while aliasing from orders k + M stays
/// negligible well beyond this radius. A circle that is too wide shows up as
/// branch risk or as a residual from a branch jump between circle points; rho
/// is then halved, up to six times.
inline MagnusSeries magnus_taylor(const RotationTrace& rot, int K, double rho = 0.0,
                                  TaylorDiagnostics* diag = nullptr) {
  if (K < 1) throw ValidationError("magnus order must be at least 1");
  if (rho <= 0.0) rho = 0.5 / rot.total_time();
  for (int attempt = 0;; ++attempt) {
    try {
      return detail::taylor_once(rot, K, rho, diag);
    } catch (const BranchRiskError&) {
      if (attempt >= 6) throw;
    } catch (const ConditioningError&) {
      if (attempt >= 6) throw;
    }
    rho *= 0.5;
  }
}

inline MagnusSeries magnus_taylor(const DriveSpec& spec, const TimeGrid& grid, Axis axis, int K, double rho = 0.0) {
  return magnus_taylor(rotation_trace(spec, grid, axis), K, rho);
}

/// exp(-i sum_k delta^k A_k.sigma)
inline Mat2c series_propagator(const MagnusSeries& s, double delta) noexcept {
  PauliVec a;
  double p = 1.0;
  for (const auto& term : s.terms) {
    p *= delta;
    a += p * term;
  }
  return su2_exp(a);
}

}  // namespace ffkit
