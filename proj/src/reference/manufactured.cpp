#include "cbdyn/reference/manufactured.hpp"

#include <algorithm>

#include "cbdyn/errors.hpp"
#include "cbdyn/linalg/quadrature.hpp"
#include "cbdyn/potential/cauchy_born.hpp"

namespace cbdyn {

Vec cauchy_born_divergence_term(const SitePotential& potential, const Mat& gradient, const std::vector<Mat>& hessian) {
  const int d = static_cast<int>(gradient.rows());
  const Mat H = eval_cauchy_born(potential, gradient, 2).hessian;
  Vec out = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      for (int q = 0; q < d; ++q) {
        for (int r = 0; r < d; ++r) s += H(i + d * j, q + d * r) * hessian[q](j, r);
      }
    }
    out(i) = -s;
  }
  return out;
}

Vec mms_static_force(const SmoothReference& ref, const SitePotential& potential, const Vec& x, double t) {
  return cauchy_born_divergence_term(potential, ref.gradient(x, t), ref.hessian(x, t));
}

Vec mms_force(const SmoothReference& ref, const SitePotential& potential, const Vec& x, double t) {
  return ref.acceleration(x, t) + mms_static_force(ref, potential, x, t);
}

Vec cell_average(const std::function<Vec(const Vec&)>& f, const Vec& centre, double eps, int order) {
  thread_local int cached_dim = -1, cached_order = -1;
  thread_local TensorRule rule;
  if (cached_dim != centre.size() || cached_order != order) {
    rule = tensor_gauss(static_cast<int>(centre.size()), order);
    cached_dim = static_cast<int>(centre.size());
    cached_order = order;
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(centre.size()));
  Vec acc;
  for (long q = 0; q < rule.weights.size(); ++q) {
    const Vec v = f(centre + 0.5 * eps * rule.nodes.col(q));
    if (q == 0) acc = Vec::Zero(v.size());
    acc += (scale * rule.weights(q)) * v;
  }
  return acc;
}

Vec f_ref(const SmoothReference& ref, const SmoothReference& mollified, const SitePotential& potential,
          const Vec& x, double eps, double t, int order) {
  const Vec stat = cell_average([&](const Vec& p) { return mms_static_force(ref, potential, p, t); }, x, eps, order);
  return stat + mollified.acceleration(x, t);
}

ManufacturedData manufacture(const SmoothReference& ref, const SitePotential& potential) {
  ManufacturedData data;
  data.dim = ref.dim();
  data.force = [ref, potential](const Vec& x, double t) { return mms_force(ref, potential, x, t); };
  data.boundary = [ref](const Vec& x, double t, int order) {
    return ref.partial(x, t, IVec::Zero(ref.dim()), order);
  };
  data.initial_position = [ref](const Vec& x) { return ref.value(x, 0.0); };
  data.initial_gradient = [ref](const Vec& x) { return ref.gradient(x, 0.0); };
  data.initial_hessian = [ref](const Vec& x) { return ref.hessian(x, 0.0); };
  data.initial_velocity = [ref](const Vec& x) { return ref.velocity(x, 0.0); };
  return data;
}

CompatibilityReport compatibility_check(const ManufacturedData& data, const SitePotential& potential,
                                        const DomainDescriptor& domain, int resolution) {
  if (domain.dim() != data.dim) throw InvalidArgument("data and domain dimensions differ");
  const Mat points = domain.boundary_samples(resolution).first;
  CompatibilityReport report;
  report.samples = static_cast<int>(points.cols());
  for (long s = 0; s < points.cols(); ++s) {
    const Vec x = points.col(s);
    report.u0 = std::max(report.u0, (data.initial_position(x) - data.boundary(x, 0.0, 0)).norm());
    report.u1 = std::max(report.u1, (data.initial_velocity(x) - data.boundary(x, 0.0, 1)).norm());
    // div DW_CB(grad h0) = -cauchy_born_divergence_term
    const Vec div = -cauchy_born_divergence_term(potential, data.initial_gradient(x), data.initial_hessian(x));
    report.u2 = std::max(report.u2, (data.force(x, 0.0) - data.boundary(x, 0.0, 2) + div).norm());
  }
  return report;
}

}  // namespace cbdyn
