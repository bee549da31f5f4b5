#pragma once

// Dense 3x3 matrices and symmetric traceless tensors (5 independent
// components).  The traceless representation uses the fixed orthonormal
// basis (Frobenius inner product)
//
//   B0 = diag(-1,-1, 2)/sqrt(6)
//   B1 = diag( 1,-1, 0)/sqrt(2)
//   B2 = (e1⊗e2 + e2⊗e1)/sqrt(2)
//   B3 = (e1⊗e3 + e3⊗e1)/sqrt(2)
//   B4 = (e2⊗e3 + e3⊗e2)/sqrt(2)
//
// so |Q|^2 (Frobenius) equals the Euclidean norm of the component vector
// and the Mat3 <-> component conversions are exact linear maps.

#include <array>
#include <cmath>

namespace qbe {

struct Mat3 {
  // row-major: m[3*i + j] = M_ij
  std::array<double, 9> m{};

  double& operator()(int i, int j) { return m[3 * i + j]; }
  double operator()(int i, int j) const { return m[3 * i + j]; }

  static Mat3 zero() { return Mat3{}; }
  static Mat3 identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
  }

  Mat3& operator+=(const Mat3& o) {
    for (int k = 0; k < 9; ++k) m[k] += o.m[k];
    return *this;
  }
  Mat3& operator-=(const Mat3& o) {
    for (int k = 0; k < 9; ++k) m[k] -= o.m[k];
    return *this;
  }
  Mat3& operator*=(double s) {
    for (int k = 0; k < 9; ++k) m[k] *= s;
    return *this;
  }

  friend Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
  friend Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
  friend Mat3 operator*(Mat3 a, double s) { return a *= s; }
  friend Mat3 operator*(double s, Mat3 a) { return a *= s; }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double trace() const { return m[0] + m[4] + m[8]; }
};

// A:B = sum_ij A_ij B_ij
inline double frobenius_inner(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int k = 0; k < 9; ++k) s += a.m[k] * b.m[k];
  return s;
}

inline double frobenius_norm2(const Mat3& a) { return frobenius_inner(a, a); }

// A - (tr A / 3) I
inline Mat3 project_traceless(const Mat3& a) {
  Mat3 r = a;
  const double t3 = a.trace() / 3.0;
  r(0, 0) -= t3;
  r(1, 1) -= t3;
  r(2, 2) -= t3;
  return r;
}

inline Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

struct SymTraceless3 {
  std::array<double, 5> c{};  // coordinates in the basis B0..B4 above

  double& operator[](int k) { return c[k]; }
  double operator[](int k) const { return c[k]; }

  SymTraceless3& operator+=(const SymTraceless3& o) {
    for (int k = 0; k < 5; ++k) c[k] += o.c[k];
    return *this;
  }
  SymTraceless3& operator-=(const SymTraceless3& o) {
    for (int k = 0; k < 5; ++k) c[k] -= o.c[k];
    return *this;
  }
  SymTraceless3& operator*=(double s) {
    for (int k = 0; k < 5; ++k) c[k] *= s;
    return *this;
  }
  friend SymTraceless3 operator+(SymTraceless3 a, const SymTraceless3& b) { return a += b; }
  friend SymTraceless3 operator-(SymTraceless3 a, const SymTraceless3& b) { return a -= b; }
  friend SymTraceless3 operator*(SymTraceless3 a, double s) { return a *= s; }
  friend SymTraceless3 operator*(double s, SymTraceless3 a) { return a *= s; }

  // |Q|^2 = sum c_k^2 (orthonormal basis)
  double norm2() const {
    return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3] + c[4] * c[4];
  }
  double norm() const { return std::sqrt(norm2()); }

  Mat3 to_mat() const {
    constexpr double s6 = 0.40824829046386301637;  // 1/sqrt(6)
    constexpr double s2 = 0.70710678118654752440;  // 1/sqrt(2)
    Mat3 q;
    q(0, 0) = -s6 * c[0] + s2 * c[1];
    q(1, 1) = -s6 * c[0] - s2 * c[1];
    q(2, 2) = 2.0 * s6 * c[0];
    q(0, 1) = q(1, 0) = s2 * c[2];
    q(0, 2) = q(2, 0) = s2 * c[3];
    q(1, 2) = q(2, 1) = s2 * c[4];
    return q;
  }

  // Orthogonal projection of an arbitrary matrix onto the symmetric
  // traceless subspace (exact inverse of to_mat on that subspace).
  static SymTraceless3 from_mat(const Mat3& a) {
    constexpr double s6 = 0.40824829046386301637;
    constexpr double s2 = 0.70710678118654752440;
    SymTraceless3 q;
    q.c[0] = s6 * (2.0 * a(2, 2) - a(0, 0) - a(1, 1));
    q.c[1] = s2 * (a(0, 0) - a(1, 1));
    q.c[2] = s2 * (a(0, 1) + a(1, 0));
    q.c[3] = s2 * (a(0, 2) + a(2, 0));
    q.c[4] = s2 * (a(1, 2) + a(2, 1));
    return q;
  }
};

// Q*Q as a full matrix
inline Mat3 square(const SymTraceless3& q) {
  const Mat3 a = q.to_mat();
  return a * a;
}

// tr Q^3 = Q : Q^2
inline double trace_cube(const SymTraceless3& q) {
  const Mat3 a = q.to_mat();
  return frobenius_inner(a, a * a);
}

}  // namespace qbe
