#pragma once

#include <span>

namespace paris::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

/// Least-squares fit y ~ slope * x through the origin.
struct OriginFit {
  double slope = 0.0;
  /// ||y - slope x|| / ||y||
  double relative_residual = 0.0;
};
OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y);

}  // namespace paris::stats
