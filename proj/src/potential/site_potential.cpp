#include "cbdyn/potential/site_potential.hpp"

#include <limits>

#include "cbdyn/errors.hpp"

namespace cbdyn {

SitePotential::SitePotential(Stencil stencil, PotentialKind kind, double r_min)
    : stencil_(std::move(stencil)), kind_(kind), r_min_(r_min) {
  if (!(r_min_ >= 0.0)) throw InvalidArgument("r_min must be nonnegative");
  if (const auto* lj = std::get_if<LennardJones>(&kind_)) {
    if (!(lj->sigma > 0.0)) throw InvalidArgument("Lennard-Jones sigma must be positive");
  }
  if (const auto* m = std::get_if<Morse>(&kind_)) {
    if (!(m->stiffness > 0.0)) throw InvalidArgument("Morse stiffness must be positive");
  }
}

std::string SitePotential::name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Harmonic>) return "harmonic";
        if constexpr (std::is_same_v<K, LennardJones>) return "lennard_jones";
        if constexpr (std::is_same_v<K, Morse>) return "morse";
      },
      kind_);
}

double SitePotential::admissibility_margin(const Mat& A) const {
  if (is_harmonic()) return std::numeric_limits<double>::infinity();
  return A.colwise().norm().minCoeff() - r_min_;
}

PotentialJet SitePotential::evaluate(const Mat& A, int order) const {
  const int d = stencil_.dim();
  const int nr = stencil_.size();
  if (A.rows() != d || A.cols() != nr) throw InvalidArgument("site potential argument has the wrong shape");
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");

  PotentialJet jet;
  if (is_harmonic()) {
    jet.value = 0.5 * A.squaredNorm();
    if (order >= 1) jet.gradient = A;
    if (order >= 2) jet.hessian = Mat::Identity(d * nr, d * nr);
    return jet;
  }

  if (order >= 1) jet.gradient = Mat::Zero(d, nr);
  if (order >= 2) jet.hessian = Mat::Zero(d * nr, d * nr);
  for (int r = 0; r < nr; ++r) {
    const double len = A.col(r).norm();
    if (!(len > r_min_)) {
      throw OutsideAdmissibleSet("bond " + std::to_string(r) + " has length " + std::to_string(len) +
                                     " <= r_min = " + std::to_string(r_min_),
                                 r, len);
    }
    const RadialJet<double> phi =
        std::visit([&](const auto& k) -> RadialJet<double> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Harmonic>) {
            return {0.5 * len * len, len, 1.0};
          } else {
            return radial(k, len);
          }
        }, kind_);
    jet.value += 0.5 * phi.value;
    if (order >= 1) jet.gradient.col(r) = (0.5 * phi.d1 / len) * A.col(r);
    if (order >= 2) {
      const Vec n = A.col(r) / len;
      const Mat nn = n * n.transpose();
      jet.hessian.block(d * r, d * r, d, d) =
          0.5 * (phi.d2 * nn + (phi.d1 / len) * (Mat::Identity(d, d) - nn));
    }
  }
  return jet;
}

Mat point_reflection(const Stencil& stencil, const Mat& A) {
  Mat out(A.rows(), A.cols());
  for (int r = 0; r < stencil.size(); ++r) out.col(r) = -A.col(stencil.opposite(r));
  return out;
}

}  // namespace cbdyn
