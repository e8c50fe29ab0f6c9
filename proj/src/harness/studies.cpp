#include "cbdyn/harness/studies.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "cbdyn/dynamics/integrator.hpp"
#include "cbdyn/errors.hpp"
#include "cbdyn/harness/scenario.hpp"
#include "cbdyn/lattice/operators.hpp"
#include "cbdyn/potential/cauchy_born.hpp"
#include "cbdyn/reference/manufactured.hpp"
#include "cbdyn/stability/continuum.hpp"
#include "cbdyn/stability/lattice_eigen.hpp"

namespace cbdyn {

namespace {

std::uint64_t run_seed(std::uint64_t seed, int index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string output_path(const ScenarioConfig& config, const StudyOptions& options, const std::string& file) {
  return (std::filesystem::path(options.output_dir.value_or(config.output_dir)) / file).string();
}

void write_rate(const ScenarioConfig& config, const StudyOptions& options, const std::string& file,
                const RateSummary& rate) {
  if (!options.write_files) return;
  CsvTable t({"slope", "intercept", "constant", "log_residual", "pairs", "exact_zero", "note"});
  if (rate.fit) {
    t.add_row({format_double(rate.fit->slope), format_double(rate.fit->intercept), format_double(rate.fit->constant()),
               format_double(rate.fit->residual), std::to_string(rate.fit->values.size()), "false", ""});
  } else {
    t.add_row({"", "", "", "", "0", rate.exact_zero ? "true" : "false", rate.note});
  }
  t.write(output_path(config, options, file));
}

std::string sanitise(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

RateSummary summarise_rate(const std::vector<double>& epsilons, const std::vector<double>& values) {
  RateSummary summary;
  std::vector<double> e, v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > kExactZero) {
      e.push_back(epsilons[i]);
      v.push_back(values[i]);
    }
  }
  if (!values.empty() && v.empty()) {
    summary.exact_zero = true;
    summary.note = "all values are exact zeros; slope undefined";
    return summary;
  }
  try {
    summary.fit = fit_rate(e, v);
  } catch (const DegenerateFit& err) {
    summary.note = std::string("degenerate fit: ") + err.what();
  }
  return summary;
}

ResidualStudy run_residual_study(const ScenarioConfig& config, const StudyOptions& options) {
  const Mollifier mollifier(config.dimension, config.mollifier_order);
  const SitePotential potential = make_potential(config);
  const int n = static_cast<int>(config.epsilons.size());
  ResidualStudy study;
  study.rows.resize(n);
  const double t = config.residual_time;

  parallel_for(n, options.threads, [&](int i) {
    ResidualRow& row = study.rows[i];
    row.epsilon = config.epsilons[i];
    std::unique_ptr<LatticeDomain> domain;
    try {
      domain = std::make_unique<LatticeDomain>(make_domain(config, row.epsilon));
    } catch (const EmptyInterior& e) {
      row.status = "skipped";
      row.skip_reason = std::string("empty_interior: ") + e.what();
      return;
    }
    row.interior_sites = static_cast<int>(domain->interior().size());
    try {
      const SmoothReference yref = mollify(config.reference, row.epsilon, mollifier);
      const Field y = sample_reference(*domain, yref, t);
      const Field div = elastic_acceleration(*domain, potential, y);
      Field r = Field::Zero(domain->dim(), domain->site_count());
      for (int site : domain->interior()) {
        const Vec fs = cell_average([&](const Vec& p) { return mms_static_force(config.reference, potential, p, t); },
                                    domain->position(site), row.epsilon, config.cell_quadrature_order);
        r.col(site) = -fs - div.col(site);
      }
      row.residual = norm_l2(*domain, r);
      row.status = "ok";
    } catch (const OutsideAdmissibleSet& e) {
      row.status = "skipped";
      row.skip_reason = std::string("outside_admissible_set: ") + e.what();
    } catch (const QuadratureOrderTooLow& e) {
      row.status = "skipped";
      row.skip_reason = std::string("quadrature_order_too_low: ") + e.what();
    }
  });

  study.table = CsvTable({"epsilon", "interior_sites", "residual_l2", "status", "hypotheses", "skip_reason"});
  std::vector<double> eps, vals;
  for (const auto& row : study.rows) {
    study.table.add_row({format_double(row.epsilon), std::to_string(row.interior_sites), format_double(row.residual),
                         row.status, hypotheses_label(config.dimension), sanitise(row.skip_reason)});
    if (row.status == "ok") {
      eps.push_back(row.epsilon);
      vals.push_back(row.residual);
    }
  }
  study.rate = summarise_rate(eps, vals);
  if (options.write_files) {
    study.table.write(output_path(config, options, "residual.csv"));
    write_rate(config, options, "residual_fit.csv", study.rate);
  }
  return study;
}

ConvergenceStudy run_convergence_study(const ScenarioConfig& config, const StudyOptions& options) {
  const Mollifier mollifier(config.dimension, config.mollifier_order);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const int n = static_cast<int>(config.epsilons.size());
  ConvergenceStudy study;
  study.rows.resize(n);
  std::vector<std::string> failures(n);

  parallel_for(n, options.threads, [&](int i) {
    ConvergenceRow& row = study.rows[i];
    row.epsilon = config.epsilons[i];
    EpsilonRun run = prepare_run(config, mollifier, row.epsilon, run_seed(seed, i));
    if (run.domain) row.interior_sites = static_cast<int>(run.domain->interior().size());
    row.min_lambda_atom = run.min_sampled_lambda_atom;
    if (!run.skip_reason.empty()) {
      row.status = "skipped";
      row.skip_reason = run.skip_reason;
      return;
    }
    row.dt = run.integrator.dt;
    row.g_dyn_norm = run.g_dyn_norm;
    row.g_static_norm = run.g_static_norm;
    const LatticeDomain& domain = *run.domain;
    const SmoothReference& yref = *run.mollified;
    double sup_root = 0.0, sup_sum = 0.0, last_root = 0.0;
    const Trajectory traj = integrate(*run.problem, run.integrator, [&](double t, const Field& y, const Field& v) {
      const Field yr = sample_reference(domain, yref, t, 0);
      const Field vr = sample_reference(domain, yref, t, 1);
      const Field u = y - yr;
      const double a = norm_l2(domain, v - vr), b = norm_h1(domain, u), c = norm_l2(domain, u);
      last_root = std::sqrt(a * a + b * b + c * c);
      sup_root = std::max(sup_root, last_root);
      sup_sum = std::max(sup_sum, a + b + c);
    });
    row.steps = traj.steps;
    row.sup_energy_root = sup_root;
    row.sup_norm_sum = sup_sum;
    row.final_energy_root = last_root;
    row.status = to_string(traj.status);
    if (traj.status != IntegrationStatus::Completed) {
      row.skip_reason = traj.message;
      failures[i] = traj.message;
    }
  });

  study.table = CsvTable({"epsilon", "interior_sites", "dt", "steps", "sup_energy_root", "sup_norm_sum",
                          "final_energy_root", "g_dyn_norm", "g_static_norm", "min_lambda_atom", "status",
                          "hypotheses", "skip_reason"});
  std::vector<double> eps, vals;
  bool precheck_failed = false;
  std::string precheck_message;
  for (const auto& row : study.rows) {
    study.table.add_row({format_double(row.epsilon), std::to_string(row.interior_sites), format_double(row.dt),
                         std::to_string(row.steps), format_double(row.sup_energy_root), format_double(row.sup_norm_sum),
                         format_double(row.final_energy_root), format_double(row.g_dyn_norm),
                         format_double(row.g_static_norm), format_double(row.min_lambda_atom), row.status,
                         hypotheses_label(config.dimension), sanitise(row.skip_reason)});
    if (row.status == "completed") {
      eps.push_back(row.epsilon);
      vals.push_back(row.sup_energy_root);
    }
    if (row.status == "skipped" && precheck_message.empty()) {
      precheck_failed = true;
      precheck_message = row.skip_reason;
    }
  }
  study.rate = summarise_rate(eps, vals);
  if (options.write_files) {
    study.table.write(output_path(config, options, "convergence.csv"));
    write_rate(config, options, "convergence_fit.csv", study.rate);
  }
  if (precheck_failed) throw StabilityPrecheckFailed(precheck_message);
  for (int i = 0; i < n; ++i) {
    if (failures[i].empty()) continue;
    if (study.rows[i].status == to_string(IntegrationStatus::Inadmissible)) {
      throw OutsideAdmissibleSet(failures[i], -1, 0.0);
    }
    throw NonFiniteState(failures[i]);
  }
  return study;
}

StabilityMap run_stability_map(const ScenarioConfig& config, const StudyOptions& options) {
  const SitePotential potential = make_potential(config);
  const auto& m = config.stability_map;
  const int d = config.dimension;
  const int shear_count = d == 1 ? 1 : m.shear_count;
  const int n = m.stretch_count * shear_count;
  StabilityMap map;
  map.rows.resize(n);
  std::unique_ptr<LatticeDomain> domain;
  if (m.epsilon) domain = std::make_unique<LatticeDomain>(make_domain(config, *m.epsilon));
  AtomFourierOptions fourier;
  fourier.grid = m.k_grid;
  auto lerp = [](double lo, double hi, int count, int i) { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); };

  parallel_for(n, options.threads, [&](int idx) {
    StabilityMapRow& row = map.rows[idx];
    row.stretch = lerp(m.stretch_min, m.stretch_max, m.stretch_count, idx / shear_count);
    row.shear = d == 1 ? 0.0 : lerp(m.shear_min, m.shear_max, m.shear_count, idx % shear_count);
    Mat A = row.stretch * Mat::Identity(d, d);
    if (d > 1) A(0, 1) += row.shear;
    row.wavevector = Vec::Constant(d, std::numeric_limits<double>::quiet_NaN());
    try {
      row.lambda_lh = lambda_lh(potential, A).value;
      const AtomFourierResult atom = lambda_atom(potential, A, fourier);
      row.lambda_atom = atom.value;
      row.wavevector = atom.wavevector;
      row.limit_probe_won = atom.limit_probe_won;
      if (domain) {
        const Mat K = potential.hessian(homogeneous_bonds(potential.stencil(), A));
        row.lambda_eps = lambda_eps(*domain, K).value;
      }
      row.sign_split = row.lambda_atom < 0.0 && row.lambda_lh > 0.0;
      row.status = "ok";
    } catch (const OutsideAdmissibleSet& e) {
      row.status = "inadmissible";
    } catch (const SolverStalled& e) {
      row.status = "solver_stalled";
    }
  });

  std::vector<std::string> header = {"stretch", "shear", "lambda_lh", "lambda_atom", "lambda_eps"};
  for (int j = 0; j < d; ++j) header.push_back("k_" + std::to_string(j + 1));
  for (const char* h : {"limit_probe_won", "sign_split", "status"}) header.push_back(h);
  map.table = CsvTable(header);
  for (const auto& row : map.rows) {
    std::vector<std::string> cells = {format_double(row.stretch), format_double(row.shear),
                                      row.status == "ok" ? format_double(row.lambda_lh) : "",
                                      row.status == "ok" ? format_double(row.lambda_atom) : "",
                                      row.lambda_eps ? format_double(*row.lambda_eps) : ""};
    for (int j = 0; j < d; ++j) cells.push_back(row.status == "ok" ? format_double(row.wavevector(j)) : "");
    cells.push_back(row.limit_probe_won ? "true" : "false");
    cells.push_back(row.sign_split ? "true" : "false");
    cells.push_back(row.status);
    map.table.add_row(cells);
  }
  if (options.write_files) map.table.write(output_path(config, options, "stability_map.csv"));
  return map;
}

GardingStudy run_garding_study(const ScenarioConfig& config, const StudyOptions& options) {
  const Mollifier mollifier(config.dimension, config.mollifier_order);
  const SitePotential potential = make_potential(config);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const int n = static_cast<int>(config.epsilons.size());
  const double t = config.garding.time;
  GardingStudy study;
  study.rows.resize(n);

  GardingOptions gopts;
  gopts.site_samples = config.garding.site_samples;

  // lambda1 defaults to 0.9 min lambda_atom over the coarsest lattice.
  double lambda1 = 0.0;
  if (config.garding.lambda1) {
    lambda1 = *config.garding.lambda1;
  } else {
    const LatticeDomain coarse = make_domain(config, config.epsilons.front());
    const Field y = sample_reference(coarse, mollify(config.reference, config.epsilons.front(), mollifier), t);
    double min_atom = std::numeric_limits<double>::infinity();
    for (const Mat& K : stability_coefficients(coarse, potential, y)) {
      min_atom = std::min(min_atom, lambda_atom_fourier(config.stencil, K, gopts.fourier).value);
    }
    if (!(min_atom > 0.0)) throw HypothesisViolated("the reference is not atomistically stable at the coarsest epsilon");
    lambda1 = 0.9 * min_atom;
  }

  parallel_for(n, options.threads, [&](int i) {
    GardingRow& row = study.rows[i];
    row.epsilon = config.epsilons[i];
    row.lambda1 = lambda1;
    try {
      const LatticeDomain domain = make_domain(config, row.epsilon);
      const Field y = sample_reference(domain, mollify(config.reference, row.epsilon, mollifier), t);
      GardingOptions local = gopts;
      local.seed = run_seed(seed, i);
      const GardingResult g = garding_verify(domain, stability_coefficients(domain, potential, y), lambda1,
                                             config.garding.r, local);
      row.lambda2_star = g.lambda2_star;
      row.mu = g.mu;
      row.min_lambda_atom = g.min_sampled_lambda_atom;
      row.max_oscillation = g.max_oscillation;
      row.eigen_steps = g.eigen.steps;
      row.status = "ok";
    } catch (const HypothesisViolated& e) {
      row.status = "hypothesis_violated";
      row.skip_reason = e.what();
    } catch (const EmptyInterior& e) {
      row.status = "skipped";
      row.skip_reason = std::string("empty_interior: ") + e.what();
    } catch (const OutsideAdmissibleSet& e) {
      row.status = "skipped";
      row.skip_reason = std::string("outside_admissible_set: ") + e.what();
    }
  });

  study.table = CsvTable({"epsilon", "r", "lambda1", "lambda2_star", "mu", "min_lambda_atom", "max_oscillation",
                          "eigen_steps", "status", "skip_reason"});
  std::string violation;
  for (const auto& row : study.rows) {
    study.table.add_row({format_double(row.epsilon), format_double(config.garding.r), format_double(row.lambda1),
                         format_double(row.lambda2_star), format_double(row.mu), format_double(row.min_lambda_atom),
                         format_double(row.max_oscillation), std::to_string(row.eigen_steps), row.status,
                         sanitise(row.skip_reason)});
    if (row.status != "ok" && violation.empty()) violation = row.skip_reason;
  }
  if (options.write_files) study.table.write(output_path(config, options, "garding.csv"));
  if (!violation.empty()) throw HypothesisViolated(violation);
  return study;
}

SimulationResult run_simulation(const ScenarioConfig& config, const StudyOptions& options) {
  const Mollifier mollifier(config.dimension, config.mollifier_order);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  SimulationResult result;
  result.epsilon = config.epsilons.front();
  EpsilonRun run = prepare_run(config, mollifier, result.epsilon, run_seed(seed, 0));
  if (!run.skip_reason.empty()) {
    if (run.skip_reason.rfind("stability_precheck_failed", 0) == 0) throw StabilityPrecheckFailed(run.skip_reason);
    if (run.skip_reason.rfind("empty_interior", 0) == 0) throw EmptyInterior(run.skip_reason);
    if (run.skip_reason.rfind("outside_admissible_set", 0) == 0) throw OutsideAdmissibleSet(run.skip_reason, -1, 0.0);
    if (run.skip_reason.rfind("cfl_violation", 0) == 0) throw ConfigError(run.skip_reason);
    throw QuadratureOrderTooLow(run.skip_reason);
  }
  const LatticeDomain& domain = *run.domain;
  const int d = domain.dim();
  std::vector<std::string> header = {"t", "site"};
  for (int j = 0; j < d; ++j) header.push_back("y_" + std::to_string(j + 1));
  for (int j = 0; j < d; ++j) header.push_back("v_" + std::to_string(j + 1));
  result.trajectory = CsvTable(header);
  result.diagnostics = CsvTable({"t", "energy", "norm_energy", "min_margin"});

  IntegratorConfig cfg = run.integrator;
  cfg.record_energy = false;
  const SmoothReference& yref = *run.mollified;
  const Trajectory traj = integrate(*run.problem, cfg, [&](double t, const Field& y, const Field& v) {
    for (int s = 0; s < domain.site_count(); ++s) {
      std::vector<std::string> cells = {format_double(t), std::to_string(s)};
      for (int j = 0; j < d; ++j) cells.push_back(format_double(y(j, s)));
      for (int j = 0; j < d; ++j) cells.push_back(format_double(v(j, s)));
      result.trajectory.add_row(std::move(cells));
    }
    double margin = 0.0;
    elastic_acceleration(domain, run.problem->potential(), y, &margin);
    const double e = total_energy(*run.problem, y, v, t);
    const double ne = norm_energy(domain, y, v, sample_reference(domain, yref, t, 0), sample_reference(domain, yref, t, 1));
    result.diagnostics.add_row({format_double(t), format_double(e), format_double(ne), format_double(margin)});
  });
  result.status = to_string(traj.status);
  result.message = traj.message;
  if (options.write_files) {
    result.trajectory.write(output_path(config, options, "trajectory.csv"));
    result.diagnostics.write(output_path(config, options, "diagnostics.csv"));
  }
  if (traj.status == IntegrationStatus::Inadmissible) throw OutsideAdmissibleSet(traj.message, -1, 0.0);
  if (traj.status == IntegrationStatus::NonFinite) throw NonFiniteState(traj.message);
  return result;
}

std::string csv_column_help() {
  return R"(CSV columns
  residual.csv        epsilon, interior_sites, residual_l2, status, hypotheses, skip_reason
  residual_fit.csv    slope, intercept, constant, log_residual, pairs, exact_zero, note
  convergence.csv     epsilon, interior_sites, dt, steps, sup_energy_root (sup_t sqrt(E)),
                      sup_norm_sum, final_energy_root, g_dyn_norm, g_static_norm,
                      min_lambda_atom (precheck sample), status, hypotheses, skip_reason
  convergence_fit.csv as residual_fit.csv, for sup_energy_root
  stability_map.csv   stretch, shear, lambda_lh, lambda_atom, lambda_eps, k_1..k_d (minimising
                      wave vector), limit_probe_won, sign_split, status
  garding.csv         epsilon, r, lambda1, lambda2_star, mu, min_lambda_atom, max_oscillation,
                      eigen_steps, status, skip_reason
  trajectory.csv      t, site, y_1..y_d, v_1..v_d
  diagnostics.csv     t, energy, norm_energy, min_margin)";
}

}  // namespace cbdyn
