#include "cbdyn/reference/mollifier.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "cbdyn/errors.hpp"
#include "cbdyn/linalg/quadrature.hpp"

namespace cbdyn {

namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

const Mollifier& doubled(int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Mollifier>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_unique<Mollifier>(dim, 2 * order);
  return *slot;
}

}  // namespace

Mollifier::Mollifier(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  if (order < 2) throw InvalidArgument("mollifier quadrature order must be at least 2");
  const TensorRule rule = tensor_gauss(dim, order);
  std::vector<int> inside;
  double mass = 0.0;
  for (long q = 0; q < rule.weights.size(); ++q) {
    const double b = bump(rule.nodes.col(q).squaredNorm());
    if (b > 0.0) {
      inside.push_back(static_cast<int>(q));
      mass += rule.weights(q) * b;
    }
  }
  normalisation_ = 1.0 / mass;
  points_.resize(dim, static_cast<long>(inside.size()));
  weights_.resize(static_cast<long>(inside.size()));
  for (std::size_t i = 0; i < inside.size(); ++i) {
    points_.col(i) = rule.nodes.col(inside[i]);
    weights_(i) = rule.weights(inside[i]) * normalisation_ * bump(rule.nodes.col(inside[i]).squaredNorm());
  }
}

double Mollifier::kernel(const Vec& z) const { return normalisation_ * bump(z.squaredNorm()); }

Vec Mollifier::convolve(const std::function<Vec(const Vec&)>& f, const Vec& x, double eps) const {
  Vec acc;
  for (long q = 0; q < weights_.size(); ++q) {
    const Vec v = f(x - eps * points_.col(q));
    if (q == 0) acc = Vec::Zero(v.size());
    acc += weights_(q) * v;
  }
  return acc;
}

double Mollifier::cosine_multiplier(const Vec& w) const {
  double s = 0.0;
  for (long q = 0; q < weights_.size(); ++q) s += weights_(q) * std::cos(w.dot(points_.col(q)));
  return s;
}

SmoothReference mollify(const SmoothReference& ref, double eps, const Mollifier& mollifier) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (mollifier.dim() != ref.dim()) throw InvalidArgument("mollifier dimension does not match the reference");
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<SeparableTerm> terms = ref.terms();
  for (auto& term : terms) {
    if (auto* sine = std::get_if<SineProfile>(&term.space)) {
      const Vec w = two_pi * eps * sine->wavenumber;
      const double m = mollifier.cosine_multiplier(w);
      const double check = doubled(mollifier.dim(), mollifier.order()).cosine_multiplier(w);
      if (std::abs(m - check) > 1e-8) {
        throw QuadratureOrderTooLow("mollifier multiplier changes by " + std::to_string(std::abs(m - check)) +
                                    " when the quadrature order is doubled");
      }
      sine->amplitude *= m;
    }
  }
  return SmoothReference(ref.dim(), std::move(terms), ref.family());
}

Vec mollify_direct(const SmoothReference& ref, const Mollifier& mollifier, double eps, const Vec& x, double t,
                   const IVec& alpha, int time_order) {
  return mollifier.convolve([&](const Vec& p) { return ref.partial(p, t, alpha, time_order); }, x, eps);
}

}  // namespace cbdyn
