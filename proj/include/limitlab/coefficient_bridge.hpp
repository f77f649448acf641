#pragma once

#include <string>
#include <vector>

#include "limitlab/landau_de_gennes.hpp"

namespace limitlab {

struct ViscosityParams {
  double beta1 = 1.0;
  double beta4 = 2.0;
  double beta5 = 0.5;
  double beta6 = 2.5;
  double beta7 = 1.0;
  double mu1 = 2.0;
  double mu2 = 2.0;
  double J = 0.1;
};

struct MaterialParams {
  BulkParams bulk;
  ElasticParams elastic;
  ViscosityParams viscosity;
  double eps = 0.5;
};

struct LeslieParams {
  double alpha1 = 0, alpha2 = 0, alpha3 = 0, alpha4 = 0, alpha5 = 0, alpha6 = 0;
  double gamma1 = 0, gamma2 = 0;
  double I = 0;
  double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
};

struct Clause {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // positive when satisfied with headroom
};

struct Certificate {
  bool pass = false;
  std::string violated;  // first failing clause, empty on pass
  std::vector<Clause> clauses;
  double mu1_over_J = 0.0;  // reported only (no threshold is imposed)
};

LeslieParams map_leslie(const ViscosityParams& vp, const BulkParams& bp, const ElasticParams& ep);
Certificate check_qs_dissipative(const ViscosityParams& vp);
bool check_quadratic_form(double b1h, double b2h, double b3h);
Certificate check_el_dissipative(const LeslieParams& lp);

}  // namespace limitlab
