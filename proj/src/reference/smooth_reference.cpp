#include "cbdyn/reference/smooth_reference.hpp"

#include <cmath>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

const double kPi = std::acos(-1.0);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Vec spatial_partial(const SpatialProfile& profile, const Vec& x, const IVec& alpha) {
  const int order = alpha.sum();
  return std::visit(
      overloaded{
          [&](const AffineProfile& p) -> Vec {
            if (order == 0) return p.F * x + p.b;
            if (order == 1) {
              int j = 0;
              while (alpha(j) == 0) ++j;
              return p.F.col(j);
            }
            return Vec::Zero(p.b.size());
          },
          [&](const SineProfile& p) -> Vec {
            double factor = std::pow(2.0 * kPi, order);
            for (int j = 0; j < alpha.size(); ++j) factor *= std::pow(p.wavenumber(j), alpha(j));
            const double theta = 2.0 * kPi * p.wavenumber.dot(x);
            return factor * std::sin(theta + 0.5 * kPi * order) * p.amplitude;
          },
      },
      profile);
}

double temporal_derivative(const TemporalProfile& profile, double t, int order) {
  return std::visit(
      overloaded{
          [&](const PolynomialInTime& p) {
            double s = 0.0;
            for (int n = static_cast<int>(p.coefficients.size()) - 1; n >= order; --n) {
              double falling = 1.0;
              for (int k = 0; k < order; ++k) falling *= n - k;
              s += p.coefficients(n) * falling * std::pow(t, n - order);
            }
            return s;
          },
          [&](const SineInTime& p) {
            return std::pow(p.omega, order) * std::sin(p.omega * t + p.phase + 0.5 * kPi * order);
          },
          [&](const CosineRampInTime& p) {
            if (order == 0) return 0.5 * (1.0 - std::cos(p.omega * t));
            return -0.5 * std::pow(p.omega, order) * std::cos(p.omega * t + 0.5 * kPi * order);
          },
      },
      profile);
}

SmoothReference::SmoothReference(int dim, std::vector<SeparableTerm> terms, std::string family)
    : dim_(dim), terms_(std::move(terms)), family_(std::move(family)) {
  if (dim_ < 1 || dim_ > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  for (const auto& term : terms_) {
    const bool ok = std::visit(
        overloaded{[&](const AffineProfile& p) {
                     return p.F.rows() == dim_ && p.F.cols() == dim_ && p.b.size() == dim_;
                   },
                   [&](const SineProfile& p) { return p.amplitude.size() == dim_ && p.wavenumber.size() == dim_; }},
        term.space);
    if (!ok) throw InvalidArgument("reference term has the wrong dimension");
  }
}

SmoothReference SmoothReference::affine_motion(const Mat& F, const Vec& b, const Vec& velocity,
                                               const Vec& acceleration) {
  const int d = static_cast<int>(b.size());
  const Mat zero = Mat::Zero(d, d);
  std::vector<SeparableTerm> terms;
  terms.push_back({AffineProfile{F, b}, PolynomialInTime{Vec::Ones(1)}});
  terms.push_back({AffineProfile{zero, velocity}, PolynomialInTime{Vec::Unit(2, 1)}});
  terms.push_back({AffineProfile{zero, 0.5 * acceleration}, PolynomialInTime{Vec::Unit(3, 2)}});
  return SmoothReference(d, std::move(terms), "affine_motion");
}

SmoothReference SmoothReference::sinusoidal(const Mat& F, const Vec& b, const Vec& amplitude, const Vec& wavenumber,
                                            double omega, double phase) {
  const int d = static_cast<int>(b.size());
  std::vector<SeparableTerm> terms;
  terms.push_back({AffineProfile{F, b}, PolynomialInTime{Vec::Ones(1)}});
  terms.push_back({SineProfile{amplitude, wavenumber}, SineInTime{omega, phase}});
  return SmoothReference(d, std::move(terms), "sinusoidal");
}

SmoothReference SmoothReference::compressive_ramp(const Mat& F0, const Vec& b, const Mat& S, double omega) {
  const int d = static_cast<int>(b.size());
  std::vector<SeparableTerm> terms;
  terms.push_back({AffineProfile{F0, b}, PolynomialInTime{Vec::Ones(1)}});
  terms.push_back({AffineProfile{S, Vec::Zero(d)}, CosineRampInTime{omega}});
  return SmoothReference(d, std::move(terms), "compressive_ramp");
}

Vec SmoothReference::partial(const Vec& x, double t, const IVec& alpha, int time_order) const {
  if (x.size() != dim_ || alpha.size() != dim_) throw InvalidArgument("point or multi-index has the wrong dimension");
  if (time_order < 0 || (alpha.array() < 0).any()) throw InvalidArgument("derivative orders must be nonnegative");
  Vec out = Vec::Zero(dim_);
  for (const auto& term : terms_) {
    const double tt = temporal_derivative(term.time, t, time_order);
    if (tt != 0.0) out += tt * spatial_partial(term.space, x, alpha);
  }
  return out;
}

Vec SmoothReference::value(const Vec& x, double t) const { return partial(x, t, IVec::Zero(dim_), 0); }
Vec SmoothReference::velocity(const Vec& x, double t) const { return partial(x, t, IVec::Zero(dim_), 1); }
Vec SmoothReference::acceleration(const Vec& x, double t) const { return partial(x, t, IVec::Zero(dim_), 2); }

Mat SmoothReference::gradient(const Vec& x, double t, int time_order) const {
  Mat G(dim_, dim_);
  for (int j = 0; j < dim_; ++j) G.col(j) = partial(x, t, IVec::Unit(dim_, j), time_order);
  return G;
}

std::vector<Mat> SmoothReference::hessian(const Vec& x, double t, int time_order) const {
  std::vector<Mat> H(dim_, Mat::Zero(dim_, dim_));
  for (int j = 0; j < dim_; ++j) {
    for (int r = j; r < dim_; ++r) {
      const Vec v = partial(x, t, IVec::Unit(dim_, j) + IVec::Unit(dim_, r), time_order);
      for (int q = 0; q < dim_; ++q) H[q](j, r) = H[q](r, j) = v(q);
    }
  }
  return H;
}

}  // namespace cbdyn
