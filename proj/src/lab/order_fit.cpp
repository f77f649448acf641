#include "limitlab/lab/order_fit.hpp"

#include <cmath>

#include "limitlab/errors.hpp"

namespace limitlab {

OrderFit fit_order(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw Error(ErrorCode::InsufficientPoints, "an order needs at least three points");
  for (const auto& [eps, err] : points)
    if (!(eps > 0.0) || !(err > 0.0)) throw Error(ErrorCode::NonPositiveError, "eps and errors must be positive");

  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [eps, err] : points) {
    const double x = std::log(eps), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw Error(ErrorCode::InsufficientPoints, "eps values must be distinct");

  OrderFit fit;
  fit.order = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.order * sx) / n;
  double ss = 0.0;
  for (const auto& [eps, err] : points) {
    const double r = std::log(err) - (fit.intercept + fit.order * std::log(eps));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  for (size_t i = 0; i + 1 < points.size(); ++i)
    fit.pairwise.push_back(std::log(points[i].second / points[i + 1].second) /
                           std::log(points[i].first / points[i + 1].first));
  const size_t m = fit.pairwise.size();
  fit.regime_stable = m >= 2 && std::abs(fit.pairwise[m - 1] - fit.pairwise[m - 2]) <= 0.2;
  return fit;
}

}  // namespace limitlab
