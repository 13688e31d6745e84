#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "paris/rng.hpp"

namespace paris {

/// Log of the Gaussian density N(x; mean, var). `var` must be positive.
double log_normal_pdf(double x, double mean, double var);
double normal_pdf(double x, double mean, double var);

/// Inverse-CDF sampler over a fixed nonnegative weight vector: O(N) set-up,
/// O(log N) per draw.
class CategoricalTable {
 public:
  /// Throws DegenerateWeights if any weight is negative or non-finite, or if
  /// all weights are zero.
  explicit CategoricalTable(std::span<const double> weights);

  std::size_t sample(RngStream& rng) const;
  std::size_t size() const noexcept { return cumulative_.size(); }
  double total() const noexcept { return cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

/// Single categorical draw, index i with probability weights[i] / sum(weights).
std::size_t categorical(std::span<const double> weights, RngStream& rng);

/// Discretised Brownian bridge from x0 to xK over K sub-steps of length eps.
/// Only the K - 1 interior points are random.
struct BridgePath {
  double x0 = 0.0;
  double xK = 0.0;
  double eps = 1.0;
  std::size_t K = 1;
  std::vector<double> interior;

  /// Point k in 0..K with z_0 = x0 and z_K = xK.
  double point(std::size_t k) const;
};

BridgePath bridge_sample(double x0, double xK, std::size_t K, double eps, RngStream& rng);

/// Writes the K - 1 interior points into `out` without allocating.
void bridge_sample_into(double x0, double xK, std::size_t K, double eps, RngStream& rng,
                        std::span<double> out);

/// Log density of the interior points under the sequential law used by
/// bridge_sample. Interior span must have K - 1 entries.
double bridge_log_density(double x0, double xK, std::size_t K, double eps,
                          std::span<const double> interior);
double bridge_log_density(const BridgePath& path);
double bridge_density(const BridgePath& path);

}  // namespace paris
