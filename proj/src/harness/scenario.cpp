#include "cbdyn/harness/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/harmonic.hpp"
#include "cbdyn/lattice/operators.hpp"
#include "cbdyn/reference/dynamic_boundary.hpp"
#include "cbdyn/reference/manufactured.hpp"
#include "cbdyn/stability/fourier.hpp"

namespace cbdyn {

SitePotential make_potential(const ScenarioConfig& config) {
  return SitePotential(config.stencil, config.potential, config.r_min);
}

LatticeDomain make_domain(const ScenarioConfig& config, double eps) {
  return LatticeDomain(config.domain, eps, config.stencil);
}

Field sample_reference(const LatticeDomain& domain, const SmoothReference& ref, double t, int time_order) {
  Field y(domain.dim(), domain.site_count());
  const IVec zero = IVec::Zero(domain.dim());
  for (int s = 0; s < domain.site_count(); ++s) y.col(s) = ref.partial(domain.position(s), t, zero, time_order);
  return y;
}

std::vector<Mat> stability_coefficients(const LatticeDomain& domain, const SitePotential& potential, const Field& y) {
  std::vector<Mat> out;
  out.reserve(domain.semi_interior().size());
  for (int site : domain.semi_interior()) out.push_back(potential.hessian(discrete_gradient(domain, y, site)));
  return out;
}

namespace {

double profile_value(const DomainDescriptor& desc, const Vec& x) {
  const double pi = std::acos(-1.0);
  if (const auto* box = std::get_if<Box>(&desc.shape())) {
    double v = 1.0;
    for (int j = 0; j < x.size(); ++j) {
      v *= std::sin(pi * (x(j) - box->lower(j)) / (box->upper(j) - box->lower(j)));
    }
    return v;
  }
  const auto& ball = std::get<Ball>(desc.shape());
  const double r = (x - ball.center).norm() / ball.radius;
  return r < 1.0 ? std::pow(std::cos(0.5 * pi * r), 2) : 0.0;
}

}  // namespace

Field interior_profile(const LatticeDomain& domain) {
  const int d = domain.dim();
  const Vec dir = Vec::Ones(d) / std::sqrt(static_cast<double>(d));
  Field p = Field::Zero(d, domain.site_count());
  for (int site : domain.interior()) p.col(site) = profile_value(domain.descriptor(), domain.position(site)) * dir;
  return p;
}

Field boundary_profile(const LatticeDomain& domain) {
  const int d = domain.dim();
  const double two_pi = 2.0 * std::acos(-1.0);
  Field p = Field::Zero(d, domain.site_count());
  for (int site : domain.boundary_layer()) {
    const Vec x = domain.position(site);
    p(0, site) = 1.0 + 0.5 * std::sin(two_pi * x.sum());
    if (d > 1) p(1, site) = 0.5 * std::cos(two_pi * x(0));
  }
  return p;
}

std::string hypotheses_label(int dimension) { return dimension == 1 ? "outside_theorem_hypotheses" : "ok"; }

EpsilonRun prepare_run(const ScenarioConfig& config, const Mollifier& mollifier, double eps, std::uint64_t seed) {
  EpsilonRun run;
  run.epsilon = eps;
  try {
    run.domain = std::make_unique<LatticeDomain>(make_domain(config, eps));
  } catch (const EmptyInterior& e) {
    run.skip_reason = std::string("empty_interior: ") + e.what();
    return run;
  }
  const LatticeDomain& domain = *run.domain;
  run.potential = std::make_unique<SitePotential>(make_potential(config));
  const SitePotential& potential = *run.potential;
  try {
    run.mollified = std::make_unique<SmoothReference>(mollify(config.reference, eps, mollifier));
  } catch (const QuadratureOrderTooLow& e) {
    run.skip_reason = std::string("quadrature_order_too_low: ") + e.what();
    return run;
  }
  const SmoothReference& yref = *run.mollified;

  // Stability precheck: lambda_atom(D^2 W(D y_ref(x, t))) > 0 on a space-time sample,
  // and the spectral bound for the default time step along the same sample.
  std::mt19937_64 rng(seed);
  const auto& semi = domain.semi_interior();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(semi.size()) - 1);
  std::vector<int> slots;
  if (config.precheck_sites >= static_cast<int>(semi.size())) {
    for (int s = 0; s < static_cast<int>(semi.size()); ++s) slots.push_back(s);
  } else {
    for (int i = 0; i < config.precheck_sites; ++i) slots.push_back(pick(rng));
  }
  AtomFourierOptions fourier;
  fourier.grid = config.dimension == 3 ? 16 : 32;
  run.min_sampled_lambda_atom = std::numeric_limits<double>::infinity();
  try {
    for (int k = 0; k < config.precheck_times; ++k) {
      const double t = config.precheck_times == 1 ? 0.0 : config.T0 * k / (config.precheck_times - 1);
      const Field y = sample_reference(domain, yref, t);
      run.spectral_bound = std::max(run.spectral_bound, hessian_spectral_bound(domain, potential, y));
      for (int s : slots) {
        const Mat K = potential.hessian(discrete_gradient(domain, y, semi[s]));
        const double la = lambda_atom_fourier(config.stencil, K, fourier).value;
        run.min_sampled_lambda_atom = std::min(run.min_sampled_lambda_atom, la);
        if (!(la > 0.0)) {
          std::ostringstream msg;
          msg << "stability_precheck_failed: lambda_atom = " << la << " at x = (" << domain.position(semi[s]).transpose()
              << "), t = " << t;
          run.skip_reason = msg.str();
          return run;
        }
      }
    }
  } catch (const OutsideAdmissibleSet& e) {
    run.skip_reason = std::string("outside_admissible_set: ") + e.what();
    return run;
  }

  // Time step.
  double dt = cfl_time_step(eps, run.spectral_bound, config.integrator.cfl_factor);
  if (config.integrator.dt) dt = *config.integrator.dt;
  else if (config.integrator.dt_factor) dt = *config.integrator.dt_factor * eps;
  run.integrator.dt = dt;
  run.integrator.cfl_factor = config.integrator.cfl_factor;
  run.integrator.spectral_bound = run.spectral_bound;
  run.integrator.sample_stride = config.integrator.sample_stride;
  run.integrator.admissibility_guard = config.integrator.admissibility_guard;
  run.integrator.keep_states = false;
  run.integrator.record_energy = false;
  if (dt > cfl_time_step(eps, run.spectral_bound, config.integrator.cfl_factor) * (1.0 + 1e-12)) {
    run.skip_reason = "cfl_violation: dt = " + std::to_string(dt) + " exceeds the CFL bound";
    return run;
  }

  const double scale = std::pow(eps, config.gamma);
  const int d = domain.dim();

  // h-perturbation, vanishing on the boundary layer, scaled to the norm-energy size C_h eps^gamma.
  Field h0 = sample_reference(domain, yref, 0.0, 0);
  Field h1 = sample_reference(domain, yref, 0.0, 1);
  const Field bump = interior_profile(domain);
  if (config.perturbation.C_h > 0.0) {
    const double a = norm_l2(domain, bump), b = norm_h1(domain, bump);
    const double target = config.perturbation.C_h * scale;
    h0 += (target / std::sqrt(a * a + b * b)) * bump;
    h1 += (target / a) * bump;
    run.h_perturbation = target;
  }

  // f-perturbation, time independent, ||.||_l2 = C_f eps^gamma.
  Field f_pert = Field::Zero(d, domain.site_count());
  if (config.perturbation.C_f > 0.0) {
    run.f_perturbation = config.perturbation.C_f * scale;
    f_pert = (run.f_perturbation / norm_l2(domain, bump)) * bump;
  }

  // g-perturbation psi(x) s(t) with s(t) = sin^2(pi t / (2 T0)), so that the data
  // at t = 0 are untouched; scaled to the dynamic boundary norm C_g eps^gamma.
  Field g_shape = Field::Zero(d, domain.site_count());
  const double T0 = config.T0;
  const double pi = std::acos(-1.0);
  auto s_of = [=](double t) { return std::pow(std::sin(0.5 * pi * t / T0), 2); };
  auto ds_of = [=](double t) { return 0.5 * pi / T0 * std::sin(pi * t / T0); };
  if (config.perturbation.C_g > 0.0) {
    const Field psi = boundary_profile(domain);
    const DynamicBoundaryNorm dyn(domain, T0, config.dyn_boundary_step.value_or(eps));
    std::vector<Field> signal;
    for (int n = 0; n < dyn.times().size(); ++n) signal.push_back(s_of(dyn.times()(n)) * psi);
    const double unit = dyn.evaluate(signal).norm;
    const double target = config.perturbation.C_g * scale;
    g_shape = (target / unit) * psi;
    run.g_dyn_norm = target;
    double sup = 0.0;
    for (int n = 0; n < dyn.times().size(); ++n) sup = std::max(sup, s_of(dyn.times()(n)));
    run.g_static_norm = sup * boundary_norm_static(domain, g_shape);
  }

  // Samplers capture only heap-owned objects, so EpsilonRun can be moved.
  const LatticeDomain* dom = run.domain.get();
  const SmoothReference* mol = run.mollified.get();
  const SmoothReference cont = config.reference;
  const SitePotential pot = potential;
  const int order = config.cell_quadrature_order;
  ForceSampler force = [dom, mol, cont, pot, order, eps, f_pert](double t, Field& out) {
    for (int site : dom->interior()) {
      out.col(site) = f_ref(cont, *mol, pot, dom->position(site), eps, t, order) + f_pert.col(site);
    }
  };
  const bool perturb_g = config.perturbation.C_g > 0.0;
  BoundarySampler boundary = [dom, mol, g_shape, perturb_g, s_of, ds_of](double t, Field& pos, Field& vel) {
    const IVec zero = IVec::Zero(dom->dim());
    for (int site : dom->boundary_layer()) {
      const Vec x = dom->position(site);
      pos.col(site) = mol->partial(x, t, zero, 0);
      vel.col(site) = mol->partial(x, t, zero, 1);
      if (perturb_g) {
        pos.col(site) += s_of(t) * g_shape.col(site);
        vel.col(site) += ds_of(t) * g_shape.col(site);
      }
    }
  };
  run.problem = std::make_unique<AtomisticProblem>(domain, potential, std::move(force), std::move(boundary),
                                                   std::move(h0), std::move(h1), T0);
  return run;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  std::vector<std::exception_ptr> errors(std::max(n, 0));
  const int workers = std::max(1, std::min(threads, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cbdyn
