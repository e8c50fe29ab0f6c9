#pragma once

#include <functional>

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// Writes f_atom(., t) into the interior columns of `out`.
using ForceSampler = std::function<void(double t, Field& out)>;
/// Writes g_atom(., t) and its time derivative into the boundary-layer
/// columns of `position` and `velocity`.
using BoundarySampler = std::function<void(double t, Field& position, Field& velocity)>;

/// y_tt - div_{R,eps} DW(D_{R,eps} y) = f_atom on the interior, y = g_atom on
/// the boundary layer, y(0) = h0, y_t(0) = h1. Unit mass per site.
class AtomisticProblem {
 public:
  /// Throws InvalidArgument if h0 / h1 disagree with g_atom(., 0) on the boundary layer.
  AtomisticProblem(const LatticeDomain& domain, SitePotential potential, ForceSampler force,
                   BoundarySampler boundary, Field h0, Field h1, double T0);

  const LatticeDomain& domain() const noexcept { return *domain_; }
  const SitePotential& potential() const noexcept { return potential_; }
  const Field& h0() const noexcept { return h0_; }
  const Field& h1() const noexcept { return h1_; }
  double T0() const noexcept { return T0_; }
  bool has_force() const noexcept { return static_cast<bool>(force_); }

  /// f_atom(., t) on all sites (zero outside the interior).
  Field force(double t) const;
  void apply_boundary(double t, Field& position, Field& velocity) const;

 private:
  const LatticeDomain* domain_;
  SitePotential potential_;
  ForceSampler force_;
  BoundarySampler boundary_;
  Field h0_, h1_;
  double T0_;
};

/// f_atom + div_{R,eps} DW(D_{R,eps} y) on the interior, zero on the boundary
/// layer. If `margin` is given it receives min over the semi-interior of the
/// admissibility margin. Throws OutsideAdmissibleSet naming the site.
Field acceleration(const AtomisticProblem& problem, const Field& y, double t, double* margin = nullptr);
/// Same, without body force.
Field elastic_acceleration(const LatticeDomain& domain, const SitePotential& potential, const Field& y,
                           double* margin = nullptr);

/// E_eps(y) = eps^d sum_{sint} W(D_{R,eps} y(x))
double lattice_energy(const LatticeDomain& domain, const SitePotential& potential, const Field& y);

/// eps^d sum_int |v|^2 / 2 + E_eps(y) - eps^d sum_int f . y
double total_energy(const AtomisticProblem& problem, const Field& y, const Field& v, double t);

/// max |eigenvalue| of D^2 W(A).
double hessian_spectral_bound(const SitePotential& potential, const Mat& A);
/// Maximum of hessian_spectral_bound over D_{R,eps} y on the semi-interior.
double hessian_spectral_bound(const LatticeDomain& domain, const SitePotential& potential, const Field& y);

/// cfl_factor * eps / sqrt(bound)
double cfl_time_step(double eps, double spectral_bound, double cfl_factor = 0.2);

/// |v - v_ref|^2_l2 + |u|^2_h1 + |u|^2_l2 with u = y - y_ref.
double norm_energy(const LatticeDomain& domain, const Field& y, const Field& v, const Field& y_ref,
                   const Field& v_ref);

}  // namespace cbdyn
