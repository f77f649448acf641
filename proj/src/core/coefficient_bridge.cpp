#include "limitlab/coefficient_bridge.hpp"

#include <limits>

namespace limitlab {

LeslieParams map_leslie(const ViscosityParams& vp, const BulkParams& bp, const ElasticParams& ep) {
  const double s = critical_s1(bp);
  const double s2 = s * s;
  LeslieParams lp;
  lp.alpha1 = vp.beta1 * s2;
  lp.alpha2 = vp.mu2 * s / 2.0 - vp.mu1 * s2;
  lp.alpha3 = vp.mu2 * s / 2.0 + vp.mu1 * s2;
  lp.alpha4 = vp.beta4 - (vp.beta5 + vp.beta6) * s / 3.0 + 2.0 * vp.beta7 * s2 / 9.0;
  lp.alpha5 = vp.beta5 * s + vp.beta7 * s2 / 3.0;
  lp.alpha6 = vp.beta6 * s + vp.beta7 * s2 / 3.0;
  lp.gamma1 = 2.0 * vp.mu1 * s2;
  lp.gamma2 = vp.mu2 * s;
  lp.I = 2.0 * vp.J * s2;
  // Frank constants for which the Landau-de Gennes elastic density evaluated on
  // s(nn - I/3) equals the Oseen-Frank density identically.
  lp.k1 = (2.0 * ep.L1 + ep.L2 + ep.L3) * s2;
  lp.k3 = lp.k1;
  lp.k2 = 2.0 * ep.L1 * s2;
  lp.k4 = ep.L3 * s2;
  return lp;
}

namespace {

void add(Certificate& c, const std::string& name, double margin, bool strict) {
  const bool ok = strict ? margin > 0.0 : margin >= 0.0;
  c.clauses.push_back({name, ok, margin});
  if (!ok && c.violated.empty()) c.violated = name;
}

void finish(Certificate& c) {
  c.pass = c.violated.empty();
}

}  // namespace

Certificate check_qs_dissipative(const ViscosityParams& vp) {
  Certificate c;
  add(c, "beta1>0", vp.beta1, true);
  add(c, "beta4>0", vp.beta4, true);
  add(c, "mu1>0", vp.mu1, true);
  const double reduced = vp.mu1 > 0.0 ? vp.beta4 - vp.mu2 * vp.mu2 / (4.0 * vp.mu1)
                                      : -std::numeric_limits<double>::infinity();
  add(c, "beta4-mu2^2/(4mu1)>0", reduced, true);
  add(c, "beta7>=0", vp.beta7, false);
  const double b56 = vp.beta5 + vp.beta6;
  if (vp.beta7 != 0.0)
    add(c, "(beta5+beta6)^2<8beta7(beta4-mu2^2/(4mu1))", 8.0 * vp.beta7 * reduced - b56 * b56, true);
  else
    add(c, "beta5+beta6=0", -std::abs(b56), false);
  c.mu1_over_J = vp.J > 0.0 ? vp.mu1 / vp.J : std::numeric_limits<double>::infinity();
  finish(c);
  return c;
}

bool check_quadratic_form(double b1h, double b2h, double b3h) {
  return b2h >= 0.0 && 2.0 * b2h + b3h >= 0.0 && 1.5 * b2h + b3h + b1h >= 0.0;
}

Certificate check_el_dissipative(const LeslieParams& lp) {
  if (lp.gamma1 == 0.0) throw Error(ErrorCode::DegenerateGamma, "gamma1 = 0");
  const double g = lp.gamma2 * lp.gamma2 / lp.gamma1;
  const double b1h = lp.alpha1 + g;
  const double b2h = lp.alpha4;
  const double b3h = lp.alpha5 + lp.alpha6 - g;
  Certificate c;
  add(c, "gamma1>0", lp.gamma1, true);
  add(c, "beta2hat>=0", b2h, false);
  add(c, "2beta2hat+beta3hat>=0", 2.0 * b2h + b3h, false);
  add(c, "1.5beta2hat+beta3hat+beta1hat>=0", 1.5 * b2h + b3h + b1h, false);
  c.mu1_over_J = lp.I > 0.0 ? lp.gamma1 / lp.I : std::numeric_limits<double>::infinity();
  finish(c);
  return c;
}

}  // namespace limitlab
