#include "limitlab/lab/initial_data.hpp"

#include <cmath>
#include <random>

#include "limitlab/hilbert_bridge.hpp"

namespace limitlab {

template <int C>
Field<C> random_smooth_field(const PeriodicGrid& g, int modes, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Field<C> f(g);
  for (int c = 0; c < C; ++c) {
    for (int kx = 0; kx <= modes; ++kx)
      for (int ky = -modes; ky <= modes; ++ky) {
        if (kx == 0 && ky <= 0) continue;
        const double a = coef(rng), b = coef(rng);
        const double wx = kTwoPi * kx / g.lx, wy = kTwoPi * ky / g.ly;
        for (int iy = 0; iy < g.ny; ++iy)
          for (int ix = 0; ix < g.nx; ++ix) {
            const double phase = wx * g.x(ix) + wy * g.y(iy);
            f(c, iy * g.nx + ix) += a * std::cos(phase) + b * std::sin(phase);
          }
      }
  }
  const double m = linf_norm(f);
  if (m > 0.0) f *= amplitude / m;
  return f;
}

template Field<3> random_smooth_field<3>(const PeriodicGrid&, int, double, std::uint64_t);
template Field<5> random_smooth_field<5>(const PeriodicGrid&, int, double, std::uint64_t);

ElState make_el_initial(const PeriodicGrid& g, const InitialRecipe& r, DiffContext& ctx) {
  ElState s(g);
  if (r.name == "equilibrium") {
    for (int p = 0; p < g.size(); ++p) set_vec(s.n, p, {{1.0, 0.0, 0.0}});
    return s;
  }
  if (r.name == "smooth") {
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const int p = iy * g.nx + ix;
        const double x = kTwoPi * g.x(ix) / g.lx, y = kTwoPi * g.y(iy) / g.ly;
        const Vec3 raw{{1.0, r.amplitude_n * std::sin(x), r.amplitude_n * std::cos(y)}};
        set_vec(s.n, p, (1.0 / norm(raw)) * raw);
        set_vec(s.v, p, {{r.amplitude_v * std::sin(y), r.amplitude_v * std::sin(x), 0.0}});
      }
    return s;
  }
  if (r.name == "random") {
    const VectorField dn = random_smooth_field<3>(g, r.modes, r.amplitude_n, r.seed);
    const VectorField dm = random_smooth_field<3>(g, r.modes, r.amplitude_ndot, r.seed + 1);
    VectorField v = random_smooth_field<3>(g, r.modes, 1.0, r.seed + 2);
    v = ctx.leray_project(v);
    const double vmax = linf_norm(v);
    if (vmax > 0.0) v *= r.amplitude_v / vmax;
    for (int p = 0; p < g.size(); ++p) {
      const Vec3 raw = Vec3{{1.0, 0.0, 0.0}} + vec_at(dn, p);
      const Vec3 n = (1.0 / norm(raw)) * raw;
      const Vec3 m = vec_at(dm, p);
      set_vec(s.n, p, n);
      set_vec(s.ndot, p, m - dot(m, n) * n);
    }
    s.v = v;
    return s;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown initial recipe '" + r.name + "'");
}

QsState make_qs_initial(const PeriodicGrid& g, const InitialRecipe& r, const MaterialParams& p, DiffContext& ctx) {
  const ElState el = make_el_initial(g, r, ctx);
  const double s = critical_s1(p.bulk);
  QsState qs(g);
  qs.q = uniaxial_field(el.n, s);
  if (r.amplitude_q > 0.0) qs.q += random_smooth_field<5>(g, r.modes, r.amplitude_q, r.seed + 3);
  for (int pt = 0; pt < g.size(); ++pt) {
    const Vec3 n = vec_at(el.n, pt), m = vec_at(el.ndot, pt);
    set_tensor(qs.qdot, pt, sym_traceless(s * (outer(m, n) + outer(n, m))));
  }
  qs.v = el.v;
  return qs;
}

}  // namespace limitlab
