#include "cbdyn/dynamics/integrator.hpp"

#include <cmath>
#include <limits>

#include "cbdyn/errors.hpp"

namespace cbdyn {

std::string to_string(IntegrationStatus status) {
  switch (status) {
    case IntegrationStatus::Completed: return "completed";
    case IntegrationStatus::Inadmissible: return "inadmissible";
    case IntegrationStatus::NonFinite: return "non_finite";
  }
  return "unknown";
}

namespace {

struct Stepper {
  const AtomisticProblem& problem;
  const IntegratorConfig& config;
  const TrajectoryObserver& observer;
  Trajectory traj;
  Field y, v, a;
  double margin = 0.0;

  void record(double t) {
    traj.times.push_back(t);
    if (config.keep_states) {
      traj.positions.push_back(y);
      traj.velocities.push_back(v);
    }
    if (config.record_energy) traj.energy.push_back(total_energy(problem, y, v, t));
    traj.margin.push_back(margin);
    if (observer) observer(t, y, v);
  }

  bool fail(IntegrationStatus status, const std::string& message) {
    traj.status = status;
    traj.message = message;
    return false;
  }

  bool accelerate(double t) {
    try {
      a = acceleration(problem, y, t, &margin);
    } catch (const OutsideAdmissibleSet& e) {
      return fail(IntegrationStatus::Inadmissible, e.what());
    }
    if (margin < config.admissibility_guard) {
      return fail(IntegrationStatus::Inadmissible,
                  "admissibility margin " + std::to_string(margin) + " below the guard at t = " + std::to_string(t));
    }
    if (!a.allFinite()) return fail(IntegrationStatus::NonFinite, "non-finite acceleration at t = " + std::to_string(t));
    return true;
  }

  /// One step of size dt ending at time t_next.
  bool step(double t_next, double dt) {
    const auto& interior = problem.domain().interior();
    for (int site : interior) {
      v.col(site) += 0.5 * dt * a.col(site);
      y.col(site) += dt * v.col(site);
    }
    problem.apply_boundary(t_next, y, v);
    if (!y.allFinite()) return fail(IntegrationStatus::NonFinite, "non-finite position at t = " + std::to_string(t_next));
    if (!accelerate(t_next)) return false;
    for (int site : interior) v.col(site) += 0.5 * dt * a.col(site);
    if (!v.allFinite()) return fail(IntegrationStatus::NonFinite, "non-finite velocity at t = " + std::to_string(t_next));
    return true;
  }
};

Trajectory run(const AtomisticProblem& problem, const Field& y0, const Field& v0, double t0, double dt, int steps,
               double t_end, const IntegratorConfig& config, const TrajectoryObserver& observer) {
  if (config.sample_stride < 1) throw InvalidArgument("sample stride must be at least 1");
  Stepper s{problem, config, observer, {}, y0, v0, {}, 0.0};
  problem.apply_boundary(t0, s.y, s.v);
  double t = t0;
  if (s.accelerate(t)) {
    s.record(t);
    for (int n = 0; n < steps; ++n) {
      const bool last = n == steps - 1 && std::isfinite(t_end);
      const double t_next = last ? t_end : t0 + (n + 1) * dt;
      if (!s.step(t_next, last ? t_end - t : dt)) break;
      t = t_next;
      s.traj.steps = n + 1;
      if ((n + 1) % config.sample_stride == 0 || n == steps - 1) s.record(t);
    }
  }
  s.traj.final_position = s.y;
  s.traj.final_velocity = s.v;
  s.traj.final_time = t;
  return std::move(s.traj);
}

void check_cfl(const AtomisticProblem& problem, const IntegratorConfig& config, double dt) {
  if (!config.check_cfl) return;
  const double bound = config.spectral_bound > 0.0
                           ? config.spectral_bound
                           : hessian_spectral_bound(problem.domain(), problem.potential(), problem.h0());
  const double limit = cfl_time_step(problem.domain().epsilon(), bound, config.cfl_factor);
  if (std::abs(dt) > limit * (1.0 + 1e-12)) {
    throw InvalidArgument("time step " + std::to_string(std::abs(dt)) + " exceeds the CFL bound " +
                          std::to_string(limit));
  }
}

}  // namespace

Trajectory integrate(const AtomisticProblem& problem, const IntegratorConfig& config, const TrajectoryObserver& observer) {
  if (!(config.dt > 0.0)) throw InvalidArgument("time step must be positive");
  check_cfl(problem, config, config.dt);
  const int steps = static_cast<int>(std::ceil(problem.T0() / config.dt - 1e-9));
  return run(problem, problem.h0(), problem.h1(), 0.0, config.dt, steps, problem.T0(), config, observer);
}

Trajectory integrate_steps(const AtomisticProblem& problem, const Field& y, const Field& v, double t0, double dt,
                           int steps, const IntegratorConfig& config, const TrajectoryObserver& observer) {
  if (dt == 0.0 || steps < 0) throw InvalidArgument("need a nonzero time step and a nonnegative step count");
  check_cfl(problem, config, dt);
  return run(problem, y, v, t0, dt, steps, std::numeric_limits<double>::infinity(), config, observer);
}

}  // namespace cbdyn
