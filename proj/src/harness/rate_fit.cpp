#include "cbdyn/harness/rate_fit.hpp"

#include <cmath>

#include "cbdyn/errors.hpp"

namespace cbdyn {

double RateFit::constant() const { return std::exp(intercept); }

RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& values) {
  if (epsilons.size() != values.size()) throw InvalidArgument("fit_rate needs matching epsilon and value lists");
  const std::size_t n = epsilons.size();
  if (n < 3) throw DegenerateFit("at least three (epsilon, value) pairs are needed, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(epsilons[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DegenerateFit("rate fits need positive finite epsilons and values");
    }
    mx += std::log(epsilons[i]);
    my += std::log(values[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(epsilons[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[i]) - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("all epsilons are equal");
  RateFit fit;
  fit.epsilons = epsilons;
  fit.values = values;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(values[i]) - (fit.intercept + fit.slope * std::log(epsilons[i]));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace cbdyn
