#pragma once

#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// Value, gradient (d x d) and Hessian (d^2 x d^2 on vec(F), column-major,
/// so entry (i + d j, q + d r) is the derivative in F_ij and F_qr).
struct CauchyBornJet {
  double value = 0.0;
  Mat gradient;
  Mat hessian;
};

/// Linear map P with vec((F rho)_rho) = P vec(F); size d|R| x d^2.
Mat cauchy_born_map(const Stencil& stencil);

/// (F rho)_{rho in R} as a d x |R| matrix.
Mat homogeneous_bonds(const Stencil& stencil, const Mat& F);

/// W_CB(F) = W_atom((F rho)_rho) with derivatives by the chain rule.
CauchyBornJet eval_cauchy_born(const SitePotential& potential, const Mat& F, int order = 2);

}  // namespace cbdyn
