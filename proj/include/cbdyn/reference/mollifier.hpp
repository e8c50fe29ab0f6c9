#pragma once

#include <functional>

#include "cbdyn/reference/smooth_reference.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// eta(z) = c exp(-1 / (1 - |z|^2)) on the unit ball, normalised so that the
/// tensor Gauss-Legendre rule of the given order integrates it to 1.
class Mollifier {
 public:
  explicit Mollifier(int dim, int order = 64);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double normalisation() const noexcept { return normalisation_; }
  double kernel(const Vec& z) const;

  /// Quadrature points inside the ball (columns) and weights w_q eta(z_q);
  /// the weights sum to 1.
  const Mat& points() const noexcept { return points_; }
  const Vec& weights() const noexcept { return weights_; }

  /// (eta_eps * f)(x) = int eta(z) f(x - eps z) dz
  Vec convolve(const std::function<Vec(const Vec&)>& f, const Vec& x, double eps) const;
  /// int eta(z) cos(w.z) dz, the Fourier multiplier of the kernel.
  double cosine_multiplier(const Vec& w) const;

 private:
  int dim_;
  int order_;
  double normalisation_ = 1.0;
  Mat points_;
  Vec weights_;
};

/// y_ref = eta_eps * y for a built-in reference, in closed form: affine terms
/// are reproduced and each sine term picks up the kernel multiplier at
/// 2 pi eps k. The multiplier is recomputed at twice the quadrature order;
/// QuadratureOrderTooLow is thrown if the two differ by more than 1e-8.
SmoothReference mollify(const SmoothReference& ref, double eps, const Mollifier& mollifier);

/// d^alpha_x d^m_t (eta_eps * y)(x, t) by direct quadrature of the
/// differentiated reference.
Vec mollify_direct(const SmoothReference& ref, const Mollifier& mollifier, double eps, const Vec& x, double t,
                   const IVec& alpha, int time_order = 0);

}  // namespace cbdyn
