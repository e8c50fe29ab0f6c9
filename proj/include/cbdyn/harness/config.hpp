#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/lattice/stencil.hpp"
#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/reference/smooth_reference.hpp"

namespace cbdyn {

struct PerturbationConfig {
  double C_g = 0.0;
  double C_h = 0.0;
  double C_f = 0.0;
};

struct IntegratorOverrides {
  /// Fixed time step; otherwise dt = dt_factor * eps if set, else the CFL
  /// default sampled along y_ref.
  std::optional<double> dt;
  std::optional<double> dt_factor;
  double cfl_factor = 0.2;
  int sample_stride = 1;
  double admissibility_guard = 0.0;
};

struct StabilityMapConfig {
  double stretch_min = 1.0, stretch_max = 1.0;
  int stretch_count = 1;
  double shear_min = 0.0, shear_max = 0.0;
  int shear_count = 1;
  /// Lattice constant lambda_eps is evaluated at this epsilon when set.
  std::optional<double> epsilon;
  int k_grid = 64;
};

struct GardingConfig {
  /// Missing: 0.9 times the smallest sampled lambda_atom at the coarsest epsilon.
  std::optional<double> lambda1;
  double r = 0.05;
  double time = 0.0;
  int site_samples = 32;
};

struct ScenarioConfig {
  int dimension = 1;
  DomainDescriptor domain = DomainDescriptor::box(Vec::Zero(1), Vec::Ones(1));
  Stencil stencil = Stencil::nearest_neighbour(1);
  PotentialKind potential = Harmonic{};
  double r_min = 0.3;
  SmoothReference reference = SmoothReference::affine_motion(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1),
                                                             Vec::Zero(1));
  std::vector<double> epsilons;
  double T0 = 1.0;
  double gamma = 2.0;
  PerturbationConfig perturbation;
  IntegratorOverrides integrator;
  double residual_time = 0.5;
  StabilityMapConfig stability_map;
  GardingConfig garding;
  int mollifier_order = 64;
  int cell_quadrature_order = 4;
  /// Time step of the dynamic boundary norm; eps when missing.
  std::optional<double> dyn_boundary_step;
  /// Sample sites/times for the lambda_atom precheck of the convergence study.
  int precheck_sites = 16;
  int precheck_times = 5;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::vector<std::string> warnings;
};

/// Default epsilon ladder per dimension.
std::vector<double> default_epsilons(int dimension);

/// Parse and validate a scenario. Throws ConfigError with the offending key.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace cbdyn
