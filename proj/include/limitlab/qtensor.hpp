#pragma once

#include <array>
#include <cmath>

#include "limitlab/errors.hpp"

namespace limitlab {

struct Vec3 {
  std::array<double, 3> c{};

  constexpr double& operator[](int i) { return c[i]; }
  constexpr double operator[](int i) const { return c[i]; }

  Vec3& operator+=(const Vec3& o) {
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec3& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(Vec3 a) { return a *= -1.0; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

// General 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  static Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  static Mat3 diag(double x, double y, double z) {
    Mat3 m;
    m(0, 0) = x;
    m(1, 1) = y;
    m(2, 2) = z;
    return m;
  }

  constexpr double& operator()(int i, int j) { return a[3 * i + j]; }
  constexpr double operator()(int i, int j) const { return a[3 * i + j]; }

  Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) a[i] += o.a[i];
    return *this;
  }
  Mat3& operator-=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat3& operator*=(double s) {
    for (auto& x : a) x *= s;
    return *this;
  }
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
inline Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
inline Mat3 operator-(Mat3 a) { return a *= -1.0; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }
inline Mat3 operator*(Mat3 a, double s) { return a *= s; }

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
Mat3 transpose(const Mat3& a);
Mat3 outer(const Vec3& u, const Vec3& w);
double trace(const Mat3& a);
double contract(const Mat3& a, const Mat3& b);  // A:B = A_ij B_ij
Mat3 commutator(const Mat3& a, const Mat3& b);
Mat3 sym(const Mat3& a);
Mat3 antisym(const Mat3& a);
double max_abs(const Mat3& a);

// Symmetric traceless 3x3 tensor. Public contract is the full matrix.
class QTensor {
 public:
  QTensor() = default;

  // Validates symmetry and tracelessness against `tol` (NotSymmetricTraceless otherwise).
  static QTensor from_matrix(const Mat3& m, double tol = kTolerances.constructor);
  // Packed components (xx, xy, xz, yy, yz); zz = -xx - yy.
  static QTensor from_packed(const std::array<double, 5>& p);

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  std::array<double, 5> packed() const { return {m_(0, 0), m_(0, 1), m_(0, 2), m_(1, 1), m_(1, 2)}; }

  QTensor& operator+=(const QTensor& o) {
    m_ += o.m_;
    close();
    return *this;
  }
  QTensor& operator-=(const QTensor& o) {
    m_ -= o.m_;
    close();
    return *this;
  }
  QTensor& operator*=(double s) {
    m_ *= s;
    close();
    return *this;
  }

 private:
  explicit QTensor(const Mat3& m) : m_(m) { close(); }
  // zz is always -(xx + yy), so the packed form round-trips bit for bit
  void close() { m_(2, 2) = -(m_(0, 0) + m_(1, 1)); }
  Mat3 m_;

  friend QTensor sym_traceless(const Mat3& m);
};

inline QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
inline QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
inline QTensor operator-(QTensor a) { return a *= -1.0; }
inline QTensor operator*(double s, QTensor a) { return a *= s; }
inline QTensor operator*(QTensor a, double s) { return a *= s; }

class Director {
 public:
  explicit Director(const Vec3& n, double tol = kTolerances.constructor);
  static Director normalized(const Vec3& v);

  const Vec3& vec() const { return n_; }
  double operator[](int i) const { return n_[i]; }

 private:
  Vec3 n_;
};

QTensor sym_traceless(const Mat3& m);
QTensor uniaxial(const Director& n, double s);
QTensor uniaxial(const Vec3& n, double s);
QTensor bform(const QTensor& q1, const QTensor& q2);
QTensor cform(const QTensor& q1, const QTensor& q2, const QTensor& q3);
double frobenius(const Mat3& a, const Mat3& b);
double frobenius(const QTensor& a, const QTensor& b);
double norm(const QTensor& q);
double biaxiality(const QTensor& q);

}  // namespace limitlab
