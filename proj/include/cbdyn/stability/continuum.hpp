#pragma once

#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct LegendreHadamardOptions {
  /// Points per unit angle range on the initial eta grid (theta in [0, pi)
  /// for d = 2; theta x phi grid of resolution x 2 resolution for d = 3).
  int resolution = 64;
  int refinement_levels = 12;
  /// Number of best grid cells refined independently.
  int starts = 4;
};

struct LegendreHadamardResult {
  double value = 0.0;
  Vec direction;     // eta, unit
  Vec polarization;  // xi, unit
};

/// Q(eta)_{ik} = sum_{jl} H_{(ij),(kl)} eta_j eta_l for a Hessian on vec(F).
Mat acoustic_matrix(const Mat& cb_hessian, const Vec& eta);

/// min over unit eta of the smallest eigenvalue of the acoustic matrix.
LegendreHadamardResult lambda_lh_tensor(const Mat& cb_hessian, int dim,
                                        const LegendreHadamardOptions& options = {});
/// lambda_LH(F) for D^2 W_CB(F). Throws OutsideAdmissibleSet.
LegendreHadamardResult lambda_lh(const SitePotential& potential, const Mat& F,
                                 const LegendreHadamardOptions& options = {});

}  // namespace cbdyn
