#pragma once

#include <cmath>
#include <random>

#include "limitlab/qtensor.hpp"
#include "limitlab/spectral_fields.hpp"
#include "oracles.hpp"

namespace testing {

using namespace limitlab;

inline oracle::M3 to_oracle(const Mat3& m) {
  oracle::M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m(i, j);
  return r;
}

inline oracle::M3 to_oracle(const QTensor& q) { return to_oracle(q.matrix()); }

inline Mat3 from_oracle(const oracle::M3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m[i][j];
  return r;
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  Mat3 matrix() {
    Mat3 m;
    for (double& x : m.a) x = uniform();
    return m;
  }
  QTensor tensor() { return sym_traceless(matrix()); }
  Vec3 unit() {
    std::normal_distribution<double> g;
    Vec3 v{{g(eng), g(eng), g(eng)}};
    return (1.0 / norm(v)) * v;
  }
};

// Sum of a few low Fourier modes with random coefficients, per component.
template <int C>
Field<C> smooth_field(const PeriodicGrid& g, Rng& r, int modes = 2, double amp = 1.0) {
  Field<C> f(g);
  for (int c = 0; c < C; ++c)
    for (int kx = -modes; kx <= modes; ++kx)
      for (int ky = 0; ky <= modes; ++ky) {
        const double a = r.uniform() * amp, b = r.uniform() * amp;
        for (int iy = 0; iy < g.ny; ++iy)
          for (int ix = 0; ix < g.nx; ++ix) {
            const double ph = kx * g.x(ix) * kTwoPi / g.lx + ky * g.y(iy) * kTwoPi / g.ly;
            f(c, iy * g.nx + ix) += a * std::cos(ph) + b * std::sin(ph);
          }
      }
  return f;
}

inline VectorField unit_field(const VectorField& v) {
  VectorField n(v.grid());
  for (int p = 0; p < v.points(); ++p) {
    const Vec3 x = vec_at(v, p);
    set_vec(n, p, (1.0 / norm(x)) * x);
  }
  return n;
}

// n = normalize(e1 + amp * smooth perturbation)
inline VectorField smooth_director(const PeriodicGrid& g, Rng& r, double amp = 0.3, int modes = 1) {
  VectorField v = smooth_field<3>(g, r, modes, amp);
  for (int p = 0; p < g.size(); ++p) v(0, p) += 1.0;
  return unit_field(v);
}

inline VectorField tangential(const VectorField& n, const VectorField& m) {
  VectorField r(n.grid());
  for (int p = 0; p < n.points(); ++p) {
    const Vec3 a = vec_at(n, p), b = vec_at(m, p);
    set_vec(r, p, b - dot(a, b) * a);
  }
  return r;
}

template <int C>
double max_abs_field(const Field<C>& f) {
  double m = 0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testing
