#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cbdyn/dynamics/problem.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct IntegratorConfig {
  double dt = 0.0;
  /// Record diagnostics (and states, if kept) every `sample_stride` steps.
  int sample_stride = 1;
  /// Abort once the admissibility margin drops below this value.
  double admissibility_guard = 0.0;
  double cfl_factor = 0.2;
  /// Bound on |D^2 W| used for the CFL check; 0 estimates it from h0.
  double spectral_bound = 0.0;
  bool check_cfl = true;
  bool keep_states = true;
  bool record_energy = true;
};

enum class IntegrationStatus { Completed, Inadmissible, NonFinite };

std::string to_string(IntegrationStatus status);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> positions;   // empty unless keep_states
  std::vector<Field> velocities;  // empty unless keep_states
  std::vector<double> energy;
  std::vector<double> margin;
  IntegrationStatus status = IntegrationStatus::Completed;
  std::string message;
  int steps = 0;
  Field final_position;
  Field final_velocity;
  double final_time = 0.0;
};

/// Called at every sample with (t, y, v).
using TrajectoryObserver = std::function<void(double, const Field&, const Field&)>;

/// Velocity Verlet from t = 0 to T0 (the last step is shortened to land on
/// T0). Interior sites are advanced; boundary-layer positions and velocities
/// are taken from g_atom at every stage. Admissibility failures and
/// non-finite states stop the run and are reported in the status.
/// Throws InvalidArgument if dt violates the CFL bound.
Trajectory integrate(const AtomisticProblem& problem, const IntegratorConfig& config,
                     const TrajectoryObserver& observer = {});

/// Same, from an arbitrary state (y, v) at time t0 for `steps` steps of size
/// dt, which may be negative. Used for reversibility checks.
Trajectory integrate_steps(const AtomisticProblem& problem, const Field& y, const Field& v, double t0, double dt,
                           int steps, const IntegratorConfig& config, const TrajectoryObserver& observer = {});

}  // namespace cbdyn
