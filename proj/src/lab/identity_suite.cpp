#include "limitlab/lab/identity_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "limitlab/coefficient_bridge.hpp"
#include "limitlab/ericksen_leslie.hpp"
#include "limitlab/hilbert_bridge.hpp"
#include "limitlab/landau_de_gennes.hpp"
#include "limitlab/qian_sheng.hpp"

namespace limitlab {

namespace {

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  Mat3 matrix() {
    Mat3 m;
    for (double& x : m.a) x = uniform(-1.0, 1.0);
    return m;
  }
  QTensor tensor() { return sym_traceless(matrix()); }
  Vec3 unit() {
    std::normal_distribution<double> g;
    Vec3 v{{g(rng), g(rng), g(rng)}};
    return (1.0 / norm(v)) * v;
  }
  Vec3 orthogonal_to(const Vec3& n) {
    Vec3 m{{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)}};
    return m - dot(m, n) * n;
  }
};

double max_entry(const Mat3& m) { return max_abs(m); }

// Index-loop evaluations used as the reference for the closed-form products.
Mat3 bform_loops(const Mat3& x, const Mat3& y) {
  Mat3 r;
  double xy = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) xy += x(k, l) * y(k, l);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j) + y(k, i) * x(j, k);
      r(i, j) = s - (i == j ? 2.0 / 3.0 * xy : 0.0);
    }
  return r;
}

Mat3 cform_loops(const Mat3& x, const Mat3& y, const Mat3& z) {
  double yz = 0, xz = 0, xy = 0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      yz += y(k, l) * z(k, l);
      xz += x(k, l) * z(k, l);
      xy += x(k, l) * y(k, l);
    }
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x(i, j) * yz + y(i, j) * xz + z(i, j) * xy;
  return r;
}

double closure_residual(const QTensor& q) {
  const Mat3& m = q.matrix();
  return std::max(max_abs(m - transpose(m)), std::abs(trace(m)));
}

BulkParams random_bulk(Sampler& s) { return {s.uniform(0.0, 2.0), s.uniform(0.0, 2.0), s.uniform(0.5, 2.0)}; }

}  // namespace

IdentityReport run_identity_suite(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Sampler s(seed);
  IdentityReport rep;
  auto add = [&](const std::string& name, double value, double tol, bool lower = false) {
    const bool ok = lower ? value > tol : value <= tol;
    rep.checks.push_back({name, value, tol, lower, ok && std::isfinite(value)});
  };

  {
    double closure = 0, bdiff = 0, cdiff = 0, adjoint = 0;
    for (int i = 0; i < 1000; ++i) {
      const QTensor a = s.tensor(), b = s.tensor(), c = s.tensor();
      const QTensor bf = bform(a, b), cf = cform(a, b, c);
      closure = std::max({closure, closure_residual(bf), closure_residual(cf), closure_residual(a + b),
                          closure_residual(sym_traceless(s.matrix()))});
      bdiff = std::max(bdiff, max_entry(bf.matrix() - bform_loops(a.matrix(), b.matrix())));
      cdiff = std::max(cdiff, max_entry(cf.matrix() - cform_loops(a.matrix(), b.matrix(), c.matrix())));
      const Mat3 m = s.matrix();
      adjoint = std::max(adjoint, std::abs(frobenius(sym_traceless(m), a) - frobenius(m, a.matrix())));
    }
    add("tensor_closure", closure, 1e-13);
    add("bform_vs_index_loops", bdiff, 1e-14);
    add("cform_vs_index_loops", cdiff, 1e-14);
    add("sym_traceless_self_adjoint", adjoint, 1e-13);
  }

  {
    double crit = 0;
    for (int i = 0; i < 1000; ++i) {
      const BulkParams bp = random_bulk(s);
      crit = std::max(crit, norm(bulk_gradient(uniaxial(Director(s.unit()), critical_s1(bp)), bp)));
    }
    add("critical_point_residual", crit, 1e-11);
  }

  {
    const BulkParams bp{1.0, 1.0, 1.0};
    double kernel = 0, adj = 0, trip = 0, idem = 0, orth = 0, comp = 0;
    double c0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i) {
      const Director n(s.unit());
      const QTensor p = s.tensor(), q = s.tensor();
      if (i < 1000) {
        const Vec3 m = s.orthogonal_to(n.vec());
        kernel = std::max(kernel, norm(hn_apply(n, sym_traceless(outer(n.vec(), m) + outer(m, n.vec())), bp)));
        adj = std::max(adj, std::abs(frobenius(hn_apply(n, p, bp), q) - frobenius(p, hn_apply(n, q, bp))));
        const QTensor po = project_out(n, p);
        trip = std::max(trip, norm(hn_inverse(n, hn_apply(n, po, bp), bp) - po));
        trip = std::max(trip, norm(hn_apply(n, hn_inverse(n, po, bp), bp) - po));
        const QTensor pi = project_in(n, q);
        idem = std::max({idem, norm(project_in(n, pi) - pi), norm(project_out(n, po) - po),
                         norm(project_in(n, po)), norm(project_out(n, pi))});
        orth = std::max(orth, std::abs(frobenius(project_in(n, q), project_out(n, p))));
        comp = std::max(comp, norm(project_in(n, q) + project_out(n, q) - q));
      }
      const QTensor po = project_out(n, q);
      const double q2 = frobenius(po, po);
      if (q2 > 1e-12) c0 = std::min(c0, frobenius(hn_apply(n, po, bp), po) / q2);
    }
    add("hn_kernel_annihilation", kernel, 1e-12);
    add("hn_self_adjoint", adj, 1e-12);
    add("hn_coercivity_c0", c0, 0.0, true);
    add("hn_inverse_round_trip", trip, 1e-10);
    add("projection_idempotence", idem, 1e-13);
    add("projection_orthogonality", orth, 1e-13);
    add("projection_complement", comp, 1e-13);
  }

  {
    double parodi = 0, gammas = 0, k13 = 0;
    for (int i = 0; i < 1000; ++i) {
      ViscosityParams vp;
      vp.beta1 = s.uniform(0.1, 3);
      vp.beta4 = s.uniform(0.1, 3);
      vp.beta5 = s.uniform(-2, 2);
      vp.mu1 = s.uniform(0.1, 3);
      vp.mu2 = s.uniform(-2, 2);
      vp.beta6 = vp.beta5 + vp.mu2;
      vp.beta7 = s.uniform(0, 2);
      vp.J = s.uniform(0.01, 1);
      const ElasticParams ep{s.uniform(0.1, 2), s.uniform(-0.5, 0.5), s.uniform(-0.5, 0.5)};
      const LeslieParams lp = map_leslie(vp, random_bulk(s), ep);
      parodi = std::max(parodi, std::abs((lp.alpha2 + lp.alpha3) - (lp.alpha6 - lp.alpha5)));
      gammas = std::max({gammas, std::abs(lp.gamma1 - (lp.alpha3 - lp.alpha2)),
                         std::abs(lp.gamma2 - (lp.alpha6 - lp.alpha5))});
      k13 = std::max(k13, std::abs(lp.k1 - lp.k3));
    }
    add("parodi_relation", parodi, 1e-13);
    add("leslie_gamma_identities", gammas, 1e-13);
    add("frank_k1_equals_k3", k13, 0.0);
  }

  {
    double worst = 0;
    for (double eps : {1.0, 0.3, 0.1})
      for (int i = 0; i < 200; ++i) {
        const BulkParams bp = random_bulk(s);
        const QTensor q0 = uniaxial(Director(s.unit()), critical_s1(bp));
        const QTensor q1 = s.tensor(), q2 = s.tensor(), q3 = s.tensor(), qr = s.tensor();
        const ExpansionTerms e = expand_bulk_gradient(q0, q1, q2, q3, qr, eps, bp);
        const QTensor full = q0 + eps * q1 + (eps * eps) * q2 + (eps * eps * eps) * (q3 + qr);
        worst = std::max(worst, norm(e.reconstruct() - bulk_gradient(full, bp)));
      }
    add("bulk_expansion_reconstruction", worst, 1e-11);
  }

  {
    const PeriodicGrid g(32, 32);
    DiffContext ctx(g);
    const MaterialParams p = [] {
      MaterialParams m;
      m.elastic = {1.0, 0.5, 0.3};
      return m;
    }();
    const double sc = critical_s1(p.bulk);
    const LeslieParams lp = map_leslie(p.viscosity, p.bulk, p.elastic);
    VectorField n(g), ndot(g), v(g);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const int pt = iy * g.nx + ix;
        const double x = g.x(ix), y = g.y(iy);
        Vec3 raw{{1.0, 0.3 * std::sin(x + 0.5), 0.25 * std::cos(y) + 0.1 * std::sin(x)}};
        const Vec3 nn = (1.0 / norm(raw)) * raw;
        set_vec(n, pt, nn);
        const Vec3 m{{0.2 * std::cos(y), 0.1 * std::sin(x + y), 0.3}};
        set_vec(ndot, pt, m - dot(m, nn) * nn);
        set_vec(v, pt, {{0.4 * std::sin(y), 0.3 * std::cos(x), 0.2 * std::sin(x)}});
      }
    Mat3Field d, w;
    ctx.strain_and_vorticity(v, d, w);
    double viscous = 0;
    for (int pt = 0; pt < g.size(); ++pt) {
      const Vec3 nn = vec_at(n, pt), m = vec_at(ndot, pt);
      const Mat3 q0 = uniaxial(nn, sc).matrix();
      const Mat3 q0dot = sc * (outer(m, nn) + outer(nn, m));
      const Mat3 sq = qs_viscous_stress(q0, q0dot, mat_at(d, pt), mat_at(w, pt), p.viscosity);
      const Vec3 bigN = m - mat_at(w, pt) * nn;
      const Mat3 sl = leslie_stress(nn, bigN, mat_at(d, pt), lp);
      Mat3 diff = sq - sl;
      const double tr = trace(diff) / 3.0;
      for (int i = 0; i < 3; ++i) diff(i, i) -= tr;
      viscous = std::max(viscous, max_abs(diff));
    }
    add("viscous_stress_consistency", viscous, 1e-10);
    const Mat3Field sd = distortion_stress(uniaxial_field(n, sc), uniaxial_field(n, sc), p.elastic, ctx);
    const Mat3Field se = ericksen_stress(n, lp, ctx);
    add("elastic_stress_consistency", linf_norm(sd - se), 1e-8);
  }

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const IdentityCheck& c) { return c.pass; });
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"comparison", c.lower_bound ? ">" : "<="},
                      {"pass", c.pass}});
  return {{"passed", r.passed}, {"seconds", r.seconds}, {"checks", checks}};
}

}  // namespace limitlab
