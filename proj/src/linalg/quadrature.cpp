#include "cbdyn/linalg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule{Vec(n), Vec(n)};
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1 || order > 512) throw InvalidArgument("Gauss-Legendre order must be in [1, 512]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

TensorRule tensor_gauss(int dim, int order) {
  const GaussRule g = gauss_legendre(order);
  long count = 1;
  for (int k = 0; k < dim; ++k) count *= order;
  TensorRule rule{Mat(dim, count), Vec(count)};
  for (long q = 0; q < count; ++q) {
    long rest = q;
    double w = 1.0;
    for (int k = dim - 1; k >= 0; --k) {
      const int i = static_cast<int>(rest % order);
      rest /= order;
      rule.nodes(k, q) = g.nodes(i);
      w *= g.weights(i);
    }
    rule.weights(q) = w;
  }
  return rule;
}

}  // namespace cbdyn
