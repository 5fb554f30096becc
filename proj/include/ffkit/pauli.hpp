#pragma once

// Fixed-size su(2) algebra: 2x2 complex matrices, Pauli coordinates and the
// closed-form SU(2) exponential. Everything here is a pure value function.

#include <array>
#include <cmath>
#include <complex>

namespace ffkit {

using cplx = std::complex<double>;

enum class Axis { x = 0, y = 1, z = 2 };

constexpr int index(Axis a) noexcept { return static_cast<int>(a); }

constexpr char axis_name(Axis a) noexcept { return "xyz"[index(a)]; }

/// Real Pauli coordinates: represents cx*sx + cy*sy + cz*sz.
struct PauliVec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static PauliVec unit(Axis a) noexcept {
    PauliVec v;
    v[a] = 1.0;
    return v;
  }

  double& operator[](Axis a) noexcept { return a == Axis::x ? x : (a == Axis::y ? y : z); }
  double operator[](Axis a) const noexcept { return a == Axis::x ? x : (a == Axis::y ? y : z); }
  double& operator[](int j) noexcept { return (*this)[static_cast<Axis>(j)]; }
  double operator[](int j) const noexcept { return (*this)[static_cast<Axis>(j)]; }

  PauliVec& operator+=(const PauliVec& o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  PauliVec& operator-=(const PauliVec& o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  PauliVec& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend PauliVec operator+(PauliVec a, const PauliVec& b) noexcept { return a += b; }
  friend PauliVec operator-(PauliVec a, const PauliVec& b) noexcept { return a -= b; }
  friend PauliVec operator*(PauliVec a, double s) noexcept { return a *= s; }
  friend PauliVec operator*(double s, PauliVec a) noexcept { return a *= s; }
  friend PauliVec operator-(PauliVec a) noexcept { return a *= -1.0; }
  friend bool operator==(const PauliVec&, const PauliVec&) = default;
};

inline double dot(const PauliVec& a, const PauliVec& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline PauliVec cross(const PauliVec& a, const PauliVec& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const PauliVec& a) noexcept { return std::sqrt(dot(a, a)); }

/// Complex Pauli coordinates (filter-function values, complex-strength logs).
struct CPauliVec {
  cplx x{};
  cplx y{};
  cplx z{};

  cplx& operator[](Axis a) noexcept { return a == Axis::x ? x : (a == Axis::y ? y : z); }
  const cplx& operator[](Axis a) const noexcept { return a == Axis::x ? x : (a == Axis::y ? y : z); }
  cplx& operator[](int j) noexcept { return (*this)[static_cast<Axis>(j)]; }
  const cplx& operator[](int j) const noexcept { return (*this)[static_cast<Axis>(j)]; }

  CPauliVec& operator+=(const CPauliVec& o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  CPauliVec& operator*=(cplx s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend CPauliVec operator+(CPauliVec a, const CPauliVec& b) noexcept { return a += b; }
  friend CPauliVec operator*(CPauliVec a, cplx s) noexcept { return a *= s; }
  friend CPauliVec operator*(cplx s, CPauliVec a) noexcept { return a *= s; }
  friend bool operator==(const CPauliVec&, const CPauliVec&) = default;

  PauliVec real() const noexcept { return {x.real(), y.real(), z.real()}; }
  PauliVec imag() const noexcept { return {x.imag(), y.imag(), z.imag()}; }
  /// Component-wise magnitudes |c_j|.
  PauliVec abs() const noexcept { return {std::abs(x), std::abs(y), std::abs(z)}; }
};

inline CPauliVec to_complex(const PauliVec& v) noexcept { return {v.x, v.y, v.z}; }

/// sqrt(sum_j |c_j|^2)
inline double norm(const CPauliVec& a) noexcept {
  return std::sqrt(std::norm(a.x) + std::norm(a.y) + std::norm(a.z));
}

/// 2x2 complex matrix, row-major: [[a, b], [c, d]].
struct Mat2c {
  cplx a{1.0};
  cplx b{};
  cplx c{};
  cplx d{1.0};

  static constexpr Mat2c identity() noexcept { return {}; }
  static constexpr Mat2c zero() noexcept { return {0.0, 0.0, 0.0, 0.0}; }

  Mat2c adjoint() const noexcept { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  cplx trace() const noexcept { return a + d; }
  cplx det() const noexcept { return a * d - b * c; }

  Mat2c& operator+=(const Mat2c& o) noexcept {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  Mat2c& operator-=(const Mat2c& o) noexcept {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  Mat2c& operator*=(cplx s) noexcept {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }
  friend Mat2c operator+(Mat2c l, const Mat2c& r) noexcept { return l += r; }
  friend Mat2c operator-(Mat2c l, const Mat2c& r) noexcept { return l -= r; }
  friend Mat2c operator*(Mat2c l, cplx s) noexcept { return l *= s; }
  friend Mat2c operator*(cplx s, Mat2c l) noexcept { return l *= s; }
  friend Mat2c operator*(const Mat2c& l, const Mat2c& r) noexcept {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend bool operator==(const Mat2c&, const Mat2c&) = default;
};

namespace pauli {
inline constexpr Mat2c I{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2c X{0.0, 1.0, 1.0, 0.0};
inline const Mat2c Y{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
inline constexpr Mat2c Z{1.0, 0.0, 0.0, -1.0};

inline const Mat2c& sigma(Axis a) noexcept { return a == Axis::x ? X : (a == Axis::y ? Y : Z); }
}  // namespace pauli

/// Largest absolute entry difference; the tolerance measure used in tests.
inline double max_abs_diff(const Mat2c& l, const Mat2c& r) noexcept {
  return std::max({std::abs(l.a - r.a), std::abs(l.b - r.b), std::abs(l.c - r.c), std::abs(l.d - r.d)});
}

/// Spectral norm (largest singular value).
inline double operator_norm(const Mat2c& m) noexcept {
  const Mat2c g = m.adjoint() * m;
  const double tr = g.trace().real();
  const double det = std::abs(g.det());
  const double disc = std::max(0.0, tr * tr - 4.0 * det);
  return std::sqrt(std::max(0.0, 0.5 * (tr + std::sqrt(disc))));
}

struct PauliDecomposition {
  cplx c0;
  CPauliVec c;
};

/// c0 = Tr(M)/2, c_j = Tr(M sigma_j)/2, so that M = c0 I + sum_j c_j sigma_j.
inline PauliDecomposition pauli_decompose(const Mat2c& m) noexcept {
  const cplx i(0.0, 1.0);
  return {0.5 * (m.a + m.d), {0.5 * (m.b + m.c), 0.5 * i * (m.b - m.c), 0.5 * (m.a - m.d)}};
}

inline Mat2c pauli_reconstruct(cplx c0, const CPauliVec& c) noexcept {
  const cplx i(0.0, 1.0);
  return {c0 + c.z, c.x - i * c.y, c.x + i * c.y, c0 - c.z};
}

inline Mat2c to_matrix(const CPauliVec& c) noexcept { return pauli_reconstruct(0.0, c); }
inline Mat2c to_matrix(const PauliVec& v) noexcept { return pauli_reconstruct(0.0, to_complex(v)); }

/// exp(-i a.sigma) = cos|a| I - i sin|a| (a/|a|).sigma
inline Mat2c su2_exp(const PauliVec& a) noexcept {
  const double th = norm(a);
  if (th == 0.0) return Mat2c::identity();
  const double c = std::cos(th);
  const double s = std::sin(th) / th;
  const cplx mi(0.0, -1.0);
  return {cplx(c, -s * a.z), mi * s * cplx(a.x, -a.y), mi * s * cplx(a.x, a.y), cplx(c, s * a.z)};
}

namespace detail {
// sin(w)/w and cos(w) for complex w given w^2, stable near zero.
inline void cos_sinc_from_square(cplx w2, cplx& c, cplx& sinc) noexcept {
  if (std::abs(w2) < 1e-8) {
    c = 1.0 - w2 / 2.0 + w2 * w2 / 24.0;
    sinc = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    return;
  }
  const cplx w = std::sqrt(w2);
  c = std::cos(w);
  sinc = std::sin(w) / w;
}
}  // namespace detail

/// exp(-i a.sigma) for complex coordinates (non-unitary generators, det = 1).
inline Mat2c su2_exp(const CPauliVec& a) noexcept {
  const cplx w2 = a.x * a.x + a.y * a.y + a.z * a.z;
  cplx c, s;
  detail::cos_sinc_from_square(w2, c, s);
  const cplx mi(0.0, -1.0);
  return pauli_reconstruct(c, mi * s * a);
}

struct Su2Log {
  CPauliVec coeffs;  // a with M = exp(-i a.sigma)
  cplx half_angle;   // theta with cos(theta) = Tr(M)/2
};

/// Principal-branch inverse of su2_exp for det-1 matrices: returns a with
/// M = exp(-i a.sigma), equivalently a.sigma = i log M.
inline Su2Log su2_log(const Mat2c& m) noexcept {
  const auto dec = pauli_decompose(m);
  const cplx c = dec.c0;
  // i (M - c I) = sin(theta) n.sigma
  const cplx i(0.0, 1.0);
  const CPauliVec s = i * dec.c;
  const cplx s2 = s.x * s.x + s.y * s.y + s.z * s.z;  // sin^2 theta
  cplx theta;
  cplx factor;
  if (std::abs(s2) < 1e-16 && c.real() > 0.0) {
    // theta/sin(theta) ~ 1 + s^2/6 + 3 s^4/40
    theta = std::sqrt(s2);
    factor = 1.0 + s2 / 6.0 + 3.0 * s2 * s2 / 40.0;
  } else {
    theta = std::acos(c);
    factor = theta / std::sin(theta);
  }
  return {factor * s, theta};
}

inline Mat2c commutator(const Mat2c& l, const Mat2c& r) noexcept { return l * r - r * l; }

}  // namespace ffkit
