#include "limitlab/qtensor.hpp"

#include <algorithm>
#include <string>

namespace limitlab {

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
  return r;
}

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

Mat3 outer(const Vec3& u, const Vec3& w) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = u[i] * w[j];
  return r;
}

double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double contract(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s += a.a[i] * b.a[i];
  return s;
}

Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

Mat3 sym(const Mat3& a) { return 0.5 * (a + transpose(a)); }

Mat3 antisym(const Mat3& a) { return 0.5 * (a - transpose(a)); }

double max_abs(const Mat3& a) {
  double m = 0.0;
  for (double x : a.a) m = std::max(m, std::abs(x));
  return m;
}

QTensor QTensor::from_matrix(const Mat3& m, double tol) {
  double asym = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  const double tr = std::abs(trace(m));
  const double scale = std::max(1.0, max_abs(m));
  if (asym > tol * scale || tr > tol * scale)
    throw Error(ErrorCode::NotSymmetricTraceless,
                "asymmetry " + std::to_string(asym) + ", trace " + std::to_string(tr));
  return sym_traceless(m);
}

QTensor QTensor::from_packed(const std::array<double, 5>& p) {
  Mat3 m;
  m(0, 0) = p[0];
  m(0, 1) = m(1, 0) = p[1];
  m(0, 2) = m(2, 0) = p[2];
  m(1, 1) = p[3];
  m(1, 2) = m(2, 1) = p[4];
  m(2, 2) = -p[0] - p[3];
  return QTensor(m);
}

Director::Director(const Vec3& n, double tol) : n_(n) {
  const double len = norm(n);
  if (!(std::abs(len - 1.0) <= tol))
    throw Error(ErrorCode::NonUnitDirector, "|n| = " + std::to_string(len));
}

Director Director::normalized(const Vec3& v) {
  const double len = norm(v);
  if (!(len > 0.0)) throw Error(ErrorCode::NonUnitDirector, "cannot normalize a zero vector");
  return Director((1.0 / len) * v, 1e-14);
}

QTensor sym_traceless(const Mat3& m) {
  Mat3 r = sym(m);
  const double t = trace(m) / 3.0;
  r(0, 0) -= t;
  r(1, 1) -= t;
  r(2, 2) -= t;
  return QTensor(r);
}

QTensor uniaxial(const Director& n, double s) {
  Mat3 m = outer(n.vec(), n.vec());
  for (int i = 0; i < 3; ++i) m(i, i) -= 1.0 / 3.0;
  // exact symmetry by construction; the trace residual is at round-off
  return QTensor::from_matrix(s * m, 1e-12);
}

QTensor uniaxial(const Vec3& n, double s) { return uniaxial(Director(n), s); }

QTensor bform(const QTensor& q1, const QTensor& q2) {
  const Mat3& a = q1.matrix();
  const Mat3& b = q2.matrix();
  Mat3 r = a * b + transpose(b) * transpose(a);
  const double t = (2.0 / 3.0) * contract(a, b);
  r(0, 0) -= t;
  r(1, 1) -= t;
  r(2, 2) -= t;
  return sym_traceless(r);
}

QTensor cform(const QTensor& q1, const QTensor& q2, const QTensor& q3) {
  return frobenius(q2, q3) * q1 + frobenius(q1, q3) * q2 + frobenius(q1, q2) * q3;
}

double frobenius(const Mat3& a, const Mat3& b) { return contract(a, b); }

double frobenius(const QTensor& a, const QTensor& b) { return contract(a.matrix(), b.matrix()); }

double norm(const QTensor& q) { return std::sqrt(frobenius(q, q)); }

double biaxiality(const QTensor& q) {
  const double q2 = frobenius(q, q);
  if (q2 <= 0.0) return 0.0;
  const Mat3& m = q.matrix();
  const double t3 = trace(m * m * m);
  const double beta = 1.0 - 6.0 * t3 * t3 / (q2 * q2 * q2);
  return std::clamp(beta, 0.0, 1.0);
}

}  // namespace limitlab
