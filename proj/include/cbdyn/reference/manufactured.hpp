#pragma once

#include <functional>
#include <vector>

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/reference/smooth_reference.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// -div DW_CB(grad y) = -sum_{jqr} D^2 W_CB(grad y)_{(ij),(qr)} d_j d_r y_q.
Vec cauchy_born_divergence_term(const SitePotential& potential, const Mat& gradient, const std::vector<Mat>& hessian);

/// f = y_tt - div DW_CB(grad y) at (x, t). Throws OutsideAdmissibleSet.
Vec mms_force(const SmoothReference& ref, const SitePotential& potential, const Vec& x, double t);
/// f - y_tt = -div DW_CB(grad y), the part of f that balances the elastic force.
Vec mms_static_force(const SmoothReference& ref, const SitePotential& potential, const Vec& x, double t);

/// Average of f over the cube centre + (-eps/2, eps/2]^d by tensor Gauss-Legendre.
Vec cell_average(const std::function<Vec(const Vec&)>& f, const Vec& centre, double eps, int order = 4);

/// f_ref = cellavg(f) + y_ref_tt - cellavg(y_tt) at a lattice site, where
/// `mollified` is y_ref. Evaluated as cellavg(f - y_tt) + y_ref_tt.
Vec f_ref(const SmoothReference& ref, const SmoothReference& mollified, const SitePotential& potential,
          const Vec& x, double eps, double t, int order = 4);

/// Continuum data of the initial-boundary-value problem.
struct ManufacturedData {
  int dim = 0;
  std::function<Vec(const Vec&, double)> force;
  /// g and its time derivatives: boundary(x, t, order).
  std::function<Vec(const Vec&, double, int)> boundary;
  std::function<Vec(const Vec&)> initial_position;
  std::function<Mat(const Vec&)> initial_gradient;
  std::function<std::vector<Mat>(const Vec&)> initial_hessian;
  std::function<Vec(const Vec&)> initial_velocity;
};

ManufacturedData manufacture(const SmoothReference& ref, const SitePotential& potential);

struct CompatibilityReport {
  double u0 = 0.0;  // max |h0 - g(., 0)|
  double u1 = 0.0;  // max |h1 - g_t(., 0)|
  double u2 = 0.0;  // max |f(., 0) - g_tt(., 0) + div DW_CB(grad h0)|
  int samples = 0;
};

/// Boundary traces of u_0, u_1, u_2 on sampled points of the domain boundary.
CompatibilityReport compatibility_check(const ManufacturedData& data, const SitePotential& potential,
                                        const DomainDescriptor& domain, int resolution = 16);

}  // namespace cbdyn
