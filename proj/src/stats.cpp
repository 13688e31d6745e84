#include "paris/stats.hpp"

#include <cmath>

#include "paris/error.hpp"

namespace paris::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ConfigError("fit: mismatched or empty inputs");
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xy += x[k] * y[k];
    xx += x[k] * x[k];
    yy += y[k] * y[k];
  }
  OriginFit fit;
  fit.slope = xx > 0.0 ? xy / xx : 0.0;
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - fit.slope * x[k];
    rss += r * r;
  }
  fit.relative_residual = yy > 0.0 ? std::sqrt(rss / yy) : 0.0;
  return fit;
}

}  // namespace paris::stats
