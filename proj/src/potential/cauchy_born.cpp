#include "cbdyn/potential/cauchy_born.hpp"

#include "cbdyn/errors.hpp"

namespace cbdyn {

Mat cauchy_born_map(const Stencil& stencil) {
  const int d = stencil.dim();
  const int nr = stencil.size();
  Mat P = Mat::Zero(d * nr, d * d);
  for (int r = 0; r < nr; ++r) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) P(i + d * r, i + d * j) = stencil.offset(r)(j);
    }
  }
  return P;
}

Mat homogeneous_bonds(const Stencil& stencil, const Mat& F) {
  if (F.rows() != stencil.dim() || F.cols() != stencil.dim()) {
    throw InvalidArgument("deformation gradient has the wrong shape");
  }
  return F * stencil.offset_matrix();
}

CauchyBornJet eval_cauchy_born(const SitePotential& potential, const Mat& F, int order) {
  const Stencil& stencil = potential.stencil();
  const PotentialJet site = potential.evaluate(homogeneous_bonds(stencil, F), order);
  CauchyBornJet jet;
  jet.value = site.value;
  if (order >= 1) {
    // DW_CB(F) = sum_rho DW_atom_rho (x) rho
    jet.gradient = site.gradient * stencil.offset_matrix().transpose();
  }
  if (order >= 2) {
    const Mat P = cauchy_born_map(stencil);
    jet.hessian = P.transpose() * site.hessian * P;
  }
  return jet;
}

}  // namespace cbdyn
