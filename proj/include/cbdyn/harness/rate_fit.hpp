#pragma once

#include <vector>

namespace cbdyn {

struct RateFit {
  std::vector<double> epsilons;
  std::vector<double> values;
  double slope = 0.0;
  /// log(value) ~ intercept + slope log(eps)
  double intercept = 0.0;
  /// Root-mean-square of the log-space residuals.
  double residual = 0.0;
  /// exp(intercept): the fitted constant C in value ~ C eps^slope.
  double constant() const;
};

/// Least-squares slope of log(value) against log(eps). Needs at least three
/// pairs with positive entries and at least two distinct epsilons; throws
/// DegenerateFit otherwise.
RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& values);

}  // namespace cbdyn
