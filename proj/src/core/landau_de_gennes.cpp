#include "limitlab/landau_de_gennes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace limitlab {

bool elastic_admissible(const ElasticParams& ep) { return ep.L1 > 0.0 && ep.L1 + ep.L2 + ep.L3 > 0.0; }

std::pair<double, double> critical_s(const BulkParams& bp) {
  if (!(bp.c > 0.0)) throw Error(ErrorCode::DegenerateBulk, "c must be positive");
  const double root = std::sqrt(bp.b * bp.b + 24.0 * bp.a * bp.c);
  return {(bp.b + root) / (4.0 * bp.c), (bp.b - root) / (4.0 * bp.c)};
}

double critical_s1(const BulkParams& bp) { return critical_s(bp).first; }

QTensor bulk_gradient(const QTensor& q, const BulkParams& bp) {
  const Mat3& m = q.matrix();
  const double q2 = frobenius(q, q);
  Mat3 r = (-bp.a + bp.c * q2) * m - bp.b * (m * m);
  const double iso = bp.b * q2 / 3.0;
  r(0, 0) += iso;
  r(1, 1) += iso;
  r(2, 2) += iso;
  return sym_traceless(r);
}

QTensor bulk_gradient_derivative(const QTensor& q, const QTensor& dq, const BulkParams& bp) {
  const Mat3& m = q.matrix();
  const Mat3& d = dq.matrix();
  const double q2 = frobenius(q, q);
  const double qd = frobenius(q, dq);
  Mat3 r = (-bp.a + bp.c * q2) * d - bp.b * (m * d + d * m) + (2.0 * bp.c * qd) * m;
  const double iso = 2.0 * bp.b * qd / 3.0;
  r(0, 0) += iso;
  r(1, 1) += iso;
  r(2, 2) += iso;
  return sym_traceless(r);
}

double bulk_energy(const QTensor& q, const BulkParams& bp) {
  const Mat3& m = q.matrix();
  const double t2 = frobenius(q, q);
  const double t3 = trace(m * m * m);
  return -0.5 * bp.a * t2 - bp.b * t3 / 3.0 + 0.25 * bp.c * t2 * t2;
}

namespace {

Mat3 nn_of(const Director& n) { return outer(n.vec(), n.vec()); }

Mat3 in_plane_part(const Mat3& nn, const Mat3& q) { return nn * q + q * nn - (2.0 * contract(q, nn)) * nn; }

}  // namespace

QTensor hn_apply(const Director& n, const QTensor& q, const BulkParams& bp) {
  const double s = critical_s1(bp);
  const Mat3 nn = nn_of(n);
  const Mat3& m = q.matrix();
  const double qnn = contract(m, nn);
  Mat3 first = m - (nn * m + m * nn) + (2.0 / 3.0) * qnn * Mat3::identity();
  Mat3 uni = nn - (1.0 / 3.0) * Mat3::identity();
  return sym_traceless(bp.b * s * first + (2.0 * bp.c * s * s * qnn) * uni);
}

QTensor project_in(const Director& n, const QTensor& q) { return sym_traceless(in_plane_part(nn_of(n), q.matrix())); }

QTensor project_out(const Director& n, const QTensor& q) {
  return sym_traceless(q.matrix() - in_plane_part(nn_of(n), q.matrix()));
}

QTensor hn_inverse(const Director& n, const QTensor& q_perp, const BulkParams& bp, double* discarded) {
  const double s = critical_s1(bp);
  const double bs = bp.b * s;
  const double pole = 4.0 * bp.c * s - bp.b;
  const double scale = std::max(std::abs(bp.b), std::abs(bp.c * s));
  if (std::abs(bs) < kTolerances.degenerate_pole || std::abs(pole) < kTolerances.degenerate_pole * scale)
    throw Error(ErrorCode::DegenerateBulk, "H_n is not invertible: b s (4 c s - b) = 0");

  const QTensor removed = project_in(n, q_perp);
  const double dropped = norm(removed);
  if (discarded) *discarded = dropped;
  const double total = norm(q_perp);
  if (dropped > kTolerances.hn_domain_relative * std::max(total, 1e-300) && dropped > 0.0)
    throw Error(ErrorCode::NotInRange, "input has in-plane content " + std::to_string(dropped) + " of " +
                                           std::to_string(total));
  const QTensor q = q_perp - removed;

  const Mat3 nn = nn_of(n);
  const Mat3& m = q.matrix();
  const double qnn = contract(m, nn);
  Mat3 first = m - (nn * m + m * nn) + (2.0 / 3.0) * qnn * Mat3::identity();
  Mat3 uni = nn - (1.0 / 3.0) * Mat3::identity();
  const double coef = (4.0 * bp.b + 2.0 * bp.c * s) / (bs * pole);
  return sym_traceless((1.0 / bs) * first + (coef * qnn) * uni);
}

double hn_max_eigenvalue(const BulkParams& bp) {
  const double s = critical_s1(bp);
  return std::max(bp.b * s, (4.0 * bp.c * s * s - bp.b * s) / 3.0);
}

namespace {

// dQ[a] = d_a Q as full matrices, a = x, y (d_z Q = 0).
struct TensorGradient {
  Mat3Field dx, dy;
};

TensorGradient gradient_of(const TensorField& q, DiffContext& ctx) {
  return {to_mat3(ctx.partial(q, Axis::X)), to_mat3(ctx.partial(q, Axis::Y))};
}

std::array<Mat3, 3> grad_at(const TensorGradient& g, int p) { return {mat_at(g.dx, p), mat_at(g.dy, p), Mat3{}}; }

// d_k = Q_km,m
Vec3 divergence_at(const std::array<Mat3, 3>& g) {
  Vec3 d;
  for (int k = 0; k < 3; ++k) d[k] = g[0](k, 0) + g[1](k, 1);
  return d;
}

}  // namespace

double elastic_energy(const TensorField& q, const ElasticParams& ep, DiffContext& ctx) {
  require_same_grid(ctx.grid(), q.grid());
  const TensorGradient g = gradient_of(q, ctx);
  double total = 0.0;
  for (int p = 0; p < q.points(); ++p) {
    const auto gq = grad_at(g, p);
    const double grad2 = contract(gq[0], gq[0]) + contract(gq[1], gq[1]);
    const Vec3 d = divergence_at(gq);
    double l3 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) l3 += gq[k](i, j) * gq[j](i, k);
    total += 0.5 * (ep.L1 * grad2 + ep.L2 * dot(d, d) + ep.L3 * l3);
  }
  return total * q.grid().cell_area();
}

TensorField elastic_operator(const TensorField& q, const ElasticParams& ep, DiffContext& ctx) {
  require_same_grid(ctx.grid(), q.grid());
  TensorField r = ctx.laplacian(q);
  r *= -ep.L1;
  const double l23 = ep.L2 + ep.L3;
  if (l23 != 0.0) {
    const TensorGradient g = gradient_of(q, ctx);
    VectorField d(q.grid());
    for (int p = 0; p < q.points(); ++p) set_vec(d, p, divergence_at(grad_at(g, p)));
    const VectorField ddx = ctx.partial(d, Axis::X);
    const VectorField ddy = ctx.partial(d, Axis::Y);
    for (int p = 0; p < q.points(); ++p) {
      Mat3 m;  // m_kl = d_l d_k
      for (int k = 0; k < 3; ++k) {
        m(k, 0) = ddx(k, p);
        m(k, 1) = ddy(k, p);
      }
      set_tensor(r, p, tensor_at(r, p) - l23 * sym_traceless(m));
    }
  }
  return r;
}

Mat3Field distortion_stress(const TensorField& q, const TensorField& qbar, const ElasticParams& ep,
                            DiffContext& ctx) {
  require_same_grid(ctx.grid(), q.grid());
  require_same_grid(q.grid(), qbar.grid());
  const TensorGradient g = gradient_of(q, ctx);
  const TensorGradient gb = gradient_of(qbar, ctx);
  Mat3Field sigma(q.grid());
  for (int p = 0; p < q.points(); ++p) {
    const auto gq = grad_at(g, p);
    const auto gqb = grad_at(gb, p);
    const Vec3 d = divergence_at(gq);
    Mat3 s;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 2; ++i) {
        double v = ep.L1 * contract(gq[j], gqb[i]);
        for (int k = 0; k < 3; ++k) {
          v += ep.L2 * d[k] * gqb[i](k, j);
          for (int l = 0; l < 2; ++l) v += ep.L3 * gq[l](k, j) * gqb[i](k, l);
        }
        s(j, i) = -v;
      }
    set_mat(sigma, p, s);
  }
  return sigma;
}

TensorField bulk_gradient(const TensorField& q, const BulkParams& bp) {
  TensorField r(q.grid());
  for (int p = 0; p < q.points(); ++p) set_tensor(r, p, bulk_gradient(tensor_at(q, p), bp));
  return r;
}

double bulk_energy(const TensorField& q, const BulkParams& bp) {
  double total = 0.0;
  for (int p = 0; p < q.points(); ++p) total += bulk_energy(tensor_at(q, p), bp);
  return total * q.grid().cell_area();
}

TensorField molecular_field(const TensorField& q, const BulkParams& bp, const ElasticParams& ep, double eps,
                            DiffContext& ctx) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadEpsilon, "eps must be positive");
  TensorField h = bulk_gradient(q, bp);
  h *= -1.0 / eps;
  h -= elastic_operator(q, ep, ctx);
  return h;
}

}  // namespace limitlab
