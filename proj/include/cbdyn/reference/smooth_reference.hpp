#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cbdyn/types.hpp"

namespace cbdyn {

/// F x + b
struct AffineProfile {
  Mat F;
  Vec b;
};

/// a sin(2 pi k.x)
struct SineProfile {
  Vec amplitude;
  Vec wavenumber;
};

using SpatialProfile = std::variant<AffineProfile, SineProfile>;

/// sum_n c_n t^n
struct PolynomialInTime {
  Vec coefficients;
};

/// sin(omega t + phase)
struct SineInTime {
  double omega = 1.0;
  double phase = 0.0;
};

/// (1 - cos(omega t)) / 2, a smooth ramp from 0 to 1 on [0, pi/omega].
struct CosineRampInTime {
  double omega = 1.0;
};

using TemporalProfile = std::variant<PolynomialInTime, SineInTime, CosineRampInTime>;

struct SeparableTerm {
  SpatialProfile space;
  TemporalProfile time;
};

/// Closed-form deformation y(x, t) = sum_terms S(x) T(t), defined on all of
/// R^d so that it serves as its own extension beyond Omega.
class SmoothReference {
 public:
  SmoothReference(int dim, std::vector<SeparableTerm> terms, std::string family = "custom");

  /// F x + b + v t + a t^2 / 2
  static SmoothReference affine_motion(const Mat& F, const Vec& b, const Vec& velocity, const Vec& acceleration);
  /// F x + b + a sin(2 pi k.x) sin(omega t + phase)
  static SmoothReference sinusoidal(const Mat& F, const Vec& b, const Vec& amplitude, const Vec& wavenumber,
                                    double omega, double phase);
  /// (F0 + S (1 - cos(omega t)) / 2) x + b
  static SmoothReference compressive_ramp(const Mat& F0, const Vec& b, const Mat& S, double omega);

  int dim() const noexcept { return dim_; }
  const std::string& family() const noexcept { return family_; }
  const std::vector<SeparableTerm>& terms() const noexcept { return terms_; }

  /// d^alpha_x d^m_t y(x, t)
  Vec partial(const Vec& x, double t, const IVec& alpha, int time_order = 0) const;
  Vec value(const Vec& x, double t) const;
  Vec velocity(const Vec& x, double t) const;
  Vec acceleration(const Vec& x, double t) const;
  /// (i, j) = d_j y_i, differentiated `time_order` times in t.
  Mat gradient(const Vec& x, double t, int time_order = 0) const;
  /// Entry q is the matrix (j, r) -> d_j d_r y_q.
  std::vector<Mat> hessian(const Vec& x, double t, int time_order = 0) const;

 private:
  int dim_;
  std::vector<SeparableTerm> terms_;
  std::string family_;
};

Vec spatial_partial(const SpatialProfile& profile, const Vec& x, const IVec& alpha);
double temporal_derivative(const TemporalProfile& profile, double t, int order);

}  // namespace cbdyn
