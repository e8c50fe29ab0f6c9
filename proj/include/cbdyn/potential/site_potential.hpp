#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "cbdyn/lattice/stencil.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// W(A) = 1/2 sum_rho |A_rho|^2
struct Harmonic {};

/// phi(r) = 4 e ((s/r)^12 - (s/r)^6). The default sigma puts the minimum at r = 1.
struct LennardJones {
  double well_depth = 1.0;
  double sigma = 0.89089871814033930;  // 2^(-1/6)
};

/// phi(r) = D (1 - exp(-a (r - r0)))^2 - D
struct Morse {
  double depth = 1.0;
  double stiffness = 2.0;
  double equilibrium = 1.0;
};

using PotentialKind = std::variant<Harmonic, LennardJones, Morse>;

template <class Scalar>
struct RadialJet {
  Scalar value;
  Scalar d1;
  Scalar d2;
};

template <class Scalar>
RadialJet<Scalar> radial(const LennardJones& p, Scalar r) {
  const Scalar s6 = std::pow(Scalar(p.sigma) / r, 6);
  const Scalar s12 = s6 * s6;
  const Scalar e4 = Scalar(4) * Scalar(p.well_depth);
  return {e4 * (s12 - s6), e4 * (Scalar(-12) * s12 + Scalar(6) * s6) / r,
          e4 * (Scalar(156) * s12 - Scalar(42) * s6) / (r * r)};
}

template <class Scalar>
RadialJet<Scalar> radial(const Morse& p, Scalar r) {
  const Scalar a = Scalar(p.stiffness);
  const Scalar e = std::exp(-a * (r - Scalar(p.equilibrium)));
  const Scalar D = Scalar(p.depth);
  return {D * (Scalar(1) - e) * (Scalar(1) - e) - D, Scalar(2) * D * a * e * (Scalar(1) - e),
          Scalar(2) * D * a * a * e * (Scalar(2) * e - Scalar(1))};
}

/// Value, gradient (d x |R|) and Hessian (d|R| x d|R|, acting on vec(A)) of a
/// site potential. Entries beyond the requested order are left empty.
struct PotentialJet {
  double value = 0.0;
  Mat gradient;
  Mat hessian;
};

/// Site potential on (R^d)^R. Pair kinds use W(A) = 1/2 sum_rho phi(|A_rho|)
/// and admit A only if every |A_rho| > r_min; the harmonic kind admits all A.
class SitePotential {
 public:
  SitePotential(Stencil stencil, PotentialKind kind, double r_min = 0.3);

  const Stencil& stencil() const noexcept { return stencil_; }
  const PotentialKind& kind() const noexcept { return kind_; }
  double r_min() const noexcept { return r_min_; }
  bool is_harmonic() const noexcept { return std::holds_alternative<Harmonic>(kind_); }
  std::string name() const;

  /// order 0, 1 or 2. Throws OutsideAdmissibleSet.
  PotentialJet evaluate(const Mat& A, int order = 2) const;
  double value(const Mat& A) const { return evaluate(A, 0).value; }
  Mat gradient(const Mat& A) const { return evaluate(A, 1).gradient; }
  Mat hessian(const Mat& A) const { return evaluate(A, 2).hessian; }

  /// min_rho |A_rho| - r_min; +infinity for the harmonic kind.
  double admissibility_margin(const Mat& A) const;

 private:
  Stencil stencil_;
  PotentialKind kind_;
  double r_min_;
};

/// T(A)_rho = -A_{-rho}
Mat point_reflection(const Stencil& stencil, const Mat& A);

}  // namespace cbdyn
