#pragma once

#include "limitlab/coefficient_bridge.hpp"
#include "limitlab/ericksen_leslie.hpp"
#include "limitlab/qian_sheng.hpp"

namespace limitlab {

// Grouping of T(Q0 + eps Q1 + eps^2 Q2 + eps^3 Q3 + eps^3 QR) by powers of eps:
//   T(Q0) + eps H(Q1) + eps^2 (H(Q2) + B1) + eps^3 (H(Q3) + B2) + eps^3 H(QR) + eps^4 T_R
// where H is the derivative of T at Q0 (equal to H_n on the uniaxial critical manifold).
struct ExpansionTerms {
  double eps = 0.0;
  QTensor t0;      // T(Q0)
  QTensor h1;      // H(Q1)
  QTensor order2;  // H(Q2) + B1
  QTensor order3;  // H(Q3) + B2
  QTensor hr;      // H(QR)
  QTensor tr;      // T_R, including B^eps

  QTensor reconstruct() const;
};

ExpansionTerms expand_bulk_gradient(const QTensor& q0, const QTensor& q1, const QTensor& q2, const QTensor& q3,
                                    const QTensor& qr, double eps, const BulkParams& bp);

// Field s1 (nn - I/3).
TensorField uniaxial_field(const VectorField& n, double s);

// H_n(Q1) = -J Q0'' - mu1 (Q0' - [Omega0, Q0]) - L(Q0) - (mu2/2) D0 evaluated on an
// Ericksen-Leslie state, with n'' from the multiplier solve under mapped coefficients.
TensorField o1_residual(const ElState& el, const MaterialParams& p, DiffContext& ctx);

struct ExpansionData {
  TensorField q0;
  TensorField q1_perp;
  int order = 0;
};

// Q1^perp = H_n^{-1} P^out(o1_residual), pointwise.
TensorField q1_perp(const ElState& el, const MaterialParams& p, DiffContext& ctx);
ExpansionData expansion_data(const ElState& el, const MaterialParams& p, int order, DiffContext& ctx);

QsState build_well_prepared(const VectorField& n0, const VectorField& ndot0, const VectorField& v0,
                            const MaterialParams& p, int order, DiffContext& ctx);

struct RemainderEnergy {
  double base = 0.0;    // |v_R|^2 + |Q_R|^2 + |Q_R'|^2 + (1/eps) <H^eps_n Q_R, Q_R>
  double first = 0.0;   // eps^2-weighted first-derivative block
  double second = 0.0;  // eps^4-weighted Laplacian block
  double total = 0.0;
};

// Remainder energy of Q_R = (Q^eps - Q0 - [order>=1] eps Q1^perp)/eps and v_R = (v^eps - v0)/eps,
// with Q_R' = (d_t + v0.grad) Q_R. `q1perp_rate` is d_t Q1^perp (ignored for order 0;
// taken as zero when absent).
RemainderEnergy remainder_energy(const QsState& qs, const ElState& el, const MaterialParams& p, int order,
                                 DiffContext& ctx, const TensorField* q1perp_rate = nullptr);

}  // namespace limitlab
