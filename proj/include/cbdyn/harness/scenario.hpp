#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbdyn/dynamics/integrator.hpp"
#include "cbdyn/harness/config.hpp"
#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/reference/mollifier.hpp"

namespace cbdyn {

SitePotential make_potential(const ScenarioConfig& config);
LatticeDomain make_domain(const ScenarioConfig& config, double eps);

/// d^m_t ref(x, t) at every site.
Field sample_reference(const LatticeDomain& domain, const SmoothReference& ref, double t, int time_order = 0);

/// D^2 W(D_{R,eps} y(x)) for every semi-interior slot.
std::vector<Mat> stability_coefficients(const LatticeDomain& domain, const SitePotential& potential, const Field& y);

/// Smooth profile (1, ..., 1)/sqrt(d) * phi(x), phi > 0 inside Omega, set to
/// zero on the boundary layer.
Field interior_profile(const LatticeDomain& domain);
/// Smooth profile on the boundary layer, zero elsewhere.
Field boundary_profile(const LatticeDomain& domain);

/// "ok", or "outside_theorem_hypotheses" for d = 1.
std::string hypotheses_label(int dimension);

/// Everything needed to integrate the atomistic problem at one epsilon with
/// the data of the convergence theorem: g_atom = y_ref on the boundary layer,
/// h = (y_ref, y_ref_t)(0), f_atom = f_ref, plus the configured perturbations.
struct EpsilonRun {
  double epsilon = 0.0;
  std::unique_ptr<LatticeDomain> domain;
  std::unique_ptr<SitePotential> potential;
  std::unique_ptr<SmoothReference> mollified;
  std::unique_ptr<AtomisticProblem> problem;
  IntegratorConfig integrator;
  /// Spectral bound of D^2 W sampled along y_ref.
  double spectral_bound = 0.0;
  double g_dyn_norm = 0.0;
  double g_static_norm = 0.0;
  double h_perturbation = 0.0;
  double f_perturbation = 0.0;
  double min_sampled_lambda_atom = 0.0;
  /// Nonempty if the run must be skipped; machine-readable prefix then ':'.
  std::string skip_reason;
};

/// Builds the run; precondition failures are reported through skip_reason.
EpsilonRun prepare_run(const ScenarioConfig& config, const Mollifier& mollifier, double eps, std::uint64_t seed);

/// Runs f(i) for i in [0, n) on up to `threads` threads; exceptions are
/// rethrown after all work has finished (lowest index first).
void parallel_for(int n, int threads, const std::function<void(int)>& f);

}  // namespace cbdyn
