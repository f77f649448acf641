#pragma once

#include <utility>

#include "limitlab/qtensor.hpp"
#include "limitlab/spectral_fields.hpp"

namespace limitlab {

struct BulkParams {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

struct ElasticParams {
  double L1 = 1.0;
  double L2 = 0.0;
  double L3 = 0.0;
};

bool elastic_admissible(const ElasticParams& ep);

// Roots of 2c s^2 - b s - 3a = 0, s1 >= s2.
std::pair<double, double> critical_s(const BulkParams& bp);
// The stable root s1.
double critical_s1(const BulkParams& bp);

QTensor bulk_gradient(const QTensor& q, const BulkParams& bp);  // T(Q)
double bulk_energy(const QTensor& q, const BulkParams& bp);     // f_b(Q)
// Exact derivative of T at q applied to dq.
QTensor bulk_gradient_derivative(const QTensor& q, const QTensor& dq, const BulkParams& bp);

QTensor hn_apply(const Director& n, const QTensor& q, const BulkParams& bp);
// Projects the input with P^out first; `discarded`, if given, receives the norm of the
// removed in-plane part. Throws NotInRange above the relative domain tolerance.
QTensor hn_inverse(const Director& n, const QTensor& q_perp, const BulkParams& bp, double* discarded = nullptr);
QTensor project_in(const Director& n, const QTensor& q);
QTensor project_out(const Director& n, const QTensor& q);
// Largest eigenvalue of H_n (it does not depend on n).
double hn_max_eigenvalue(const BulkParams& bp);

double elastic_energy(const TensorField& q, const ElasticParams& ep, DiffContext& ctx);
TensorField elastic_operator(const TensorField& q, const ElasticParams& ep, DiffContext& ctx);  // L(Q)
Mat3Field distortion_stress(const TensorField& q, const TensorField& qbar, const ElasticParams& ep,
                            DiffContext& ctx);  // entry (j,i) holds sigma^d_ji
TensorField bulk_gradient(const TensorField& q, const BulkParams& bp);
double bulk_energy(const TensorField& q, const BulkParams& bp);  // integrated
TensorField molecular_field(const TensorField& q, const BulkParams& bp, const ElasticParams& ep, double eps,
                            DiffContext& ctx);  // H^eps = -T/eps - L(Q)

}  // namespace limitlab
