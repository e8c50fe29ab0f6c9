#include "cbdyn/dynamics/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/operators.hpp"

namespace cbdyn {

AtomisticProblem::AtomisticProblem(const LatticeDomain& domain, SitePotential potential, ForceSampler force,
                                   BoundarySampler boundary, Field h0, Field h1, double T0)
    : domain_(&domain),
      potential_(std::move(potential)),
      force_(std::move(force)),
      boundary_(std::move(boundary)),
      h0_(std::move(h0)),
      h1_(std::move(h1)),
      T0_(T0) {
  const int d = domain.dim();
  const int n = domain.site_count();
  if (h0_.rows() != d || h0_.cols() != n || h1_.rows() != d || h1_.cols() != n) {
    throw InvalidArgument("initial fields have the wrong shape");
  }
  if (!h0_.allFinite() || !h1_.allFinite()) throw InvalidArgument("initial fields must be finite");
  if (!(T0_ > 0.0)) throw InvalidArgument("T0 must be positive");
  if (!boundary_) throw InvalidArgument("a boundary sampler is required");
  if (potential_.stencil().dim() != d) throw InvalidArgument("potential and domain dimensions differ");

  Field gp = h0_, gv = h1_;
  boundary_(0.0, gp, gv);
  for (int site : domain.boundary_layer()) {
    const double tol_p = 1e-12 * std::max(1.0, h0_.col(site).norm());
    const double tol_v = 1e-12 * std::max(1.0, h1_.col(site).norm());
    if ((gp.col(site) - h0_.col(site)).norm() > tol_p || (gv.col(site) - h1_.col(site)).norm() > tol_v) {
      throw InvalidArgument("initial data disagree with the boundary data at t = 0 (site " +
                            std::to_string(site) + ")");
    }
  }
}

Field AtomisticProblem::force(double t) const {
  Field f = zero_field(*domain_);
  if (force_) {
    force_(t, f);
    for (int site : domain_->boundary_layer()) f.col(site).setZero();
  }
  return f;
}

void AtomisticProblem::apply_boundary(double t, Field& position, Field& velocity) const {
  boundary_(t, position, velocity);
}

Field elastic_acceleration(const LatticeDomain& domain, const SitePotential& potential, const Field& y,
                           double* margin) {
  const auto& semi = domain.semi_interior();
  const int d = domain.dim();
  const int nr = domain.stencil().size();
  StencilField stress(d, nr, static_cast<int>(semi.size()));
  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(semi.size()); ++k) {
    const Mat A = discrete_gradient(domain, y, semi[k]);
    if (margin) min_margin = std::min(min_margin, potential.admissibility_margin(A));
    try {
      stress.at(k) = potential.gradient(A);
    } catch (const OutsideAdmissibleSet& e) {
      throw OutsideAdmissibleSet(std::string(e.what()) + " at site " + std::to_string(semi[k]), e.bond(),
                                 e.length(), semi[k]);
    }
  }
  if (margin) *margin = min_margin;
  return discrete_divergence(domain, stress);
}

Field acceleration(const AtomisticProblem& problem, const Field& y, double t, double* margin) {
  Field a = elastic_acceleration(problem.domain(), problem.potential(), y, margin);
  if (problem.has_force()) a += problem.force(t);
  return a;
}

double lattice_energy(const LatticeDomain& domain, const SitePotential& potential, const Field& y) {
  double e = 0.0;
  for (int site : domain.semi_interior()) e += potential.value(discrete_gradient(domain, y, site));
  return domain.cell_volume() * e;
}

double total_energy(const AtomisticProblem& problem, const Field& y, const Field& v, double t) {
  const LatticeDomain& domain = problem.domain();
  double kinetic = 0.0, work = 0.0;
  const Field f = problem.force(t);
  for (int site : domain.interior()) {
    kinetic += 0.5 * v.col(site).squaredNorm();
    work += f.col(site).dot(y.col(site));
  }
  return domain.cell_volume() * (kinetic - work) + lattice_energy(domain, problem.potential(), y);
}

double hessian_spectral_bound(const SitePotential& potential, const Mat& A) {
  if (potential.is_harmonic()) return 1.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(potential.hessian(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hessian_spectral_bound(const LatticeDomain& domain, const SitePotential& potential, const Field& y) {
  double bound = 0.0;
  for (int site : domain.semi_interior()) {
    bound = std::max(bound, hessian_spectral_bound(potential, discrete_gradient(domain, y, site)));
  }
  return bound;
}

double cfl_time_step(double eps, double spectral_bound, double cfl_factor) {
  if (!(spectral_bound > 0.0)) throw InvalidArgument("spectral bound must be positive");
  return cfl_factor * eps / std::sqrt(spectral_bound);
}

double norm_energy(const LatticeDomain& domain, const Field& y, const Field& v, const Field& y_ref,
                   const Field& v_ref) {
  const Field u = y - y_ref;
  const double a = norm_l2(domain, v - v_ref);
  const double b = norm_h1(domain, u);
  const double c = norm_l2(domain, u);
  return a * a + b * b + c * c;
}

}  // namespace cbdyn
