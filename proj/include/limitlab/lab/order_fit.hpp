#pragma once

#include <utility>
#include <vector>

namespace limitlab {

struct OrderFit {
  double order = 0.0;      // least-squares slope of log(err) against log(eps)
  double intercept = 0.0;  // log of the constant
  double residual = 0.0;   // RMS residual of the log-log fit
  std::vector<double> pairwise;  // log(e_i/e_{i+1}) / log(eps_i/eps_{i+1})
  bool regime_stable = false;    // last two pairwise orders agree within 0.2
};

// Needs at least three (eps, err) points with positive entries.
OrderFit fit_order(const std::vector<std::pair<double, double>>& points);

}  // namespace limitlab
