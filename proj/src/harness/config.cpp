#include "cbdyn/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

double number_or(const json& obj, const std::string& field, const std::string& path, double fallback) {
  if (!obj.contains(field)) return fallback;
  return number(obj.at(field), path + "." + field);
}

int integer_or(const json& obj, const std::string& field, const std::string& path, int fallback) {
  if (!obj.contains(field)) return fallback;
  const json& j = obj.at(field);
  if (!j.is_number_integer()) fail(path + "." + field, "expected an integer");
  return j.get<int>();
}

Vec vector_of(const json& j, int d, const std::string& key) {
  if (d == 1 && j.is_number()) return Vec::Constant(1, number(j, key));
  if (!j.is_array() || static_cast<int>(j.size()) != d) fail(key, "expected an array of length " + std::to_string(d));
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = number(j[i], key);
  return v;
}

/// Row-major nested arrays; a bare number is accepted in 1D.
Mat matrix_of(const json& j, int d, const std::string& key) {
  if (d == 1 && j.is_number()) return Mat::Constant(1, 1, number(j, key));
  if (!j.is_array() || static_cast<int>(j.size()) != d) fail(key, "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != d) fail(key, "expected rows of length " + std::to_string(d));
    for (int k = 0; k < d; ++k) m(i, k) = number(j[i][k], key);
  }
  return m;
}

Vec vector_or(const json& obj, const std::string& field, const std::string& path, int d, const Vec& fallback) {
  if (!obj.contains(field)) return fallback;
  return vector_of(obj.at(field), d, path + "." + field);
}

Mat matrix_or(const json& obj, const std::string& field, const std::string& path, int d, const Mat& fallback) {
  if (!obj.contains(field)) return fallback;
  return matrix_of(obj.at(field), d, path + "." + field);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

const json& object_at(const json& root, const std::string& key) {
  const json& j = root.at(key);
  if (!j.is_object()) fail(key, "expected an object");
  return j;
}

DomainDescriptor parse_domain(const json& j, int d) {
  if (!j.is_object()) fail("domain", "expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) fail("domain.type", "expected \"box\" or \"ball\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "box") {
      reject_unknown(j, {"type", "lower", "upper"}, "domain");
      return DomainDescriptor::box(vector_or(j, "lower", "domain", d, Vec::Zero(d)),
                                   vector_or(j, "upper", "domain", d, Vec::Ones(d)));
    }
    if (type == "ball") {
      reject_unknown(j, {"type", "center", "radius"}, "domain");
      return DomainDescriptor::ball(vector_or(j, "center", "domain", d, Vec::Constant(d, 0.5)),
                                    number_or(j, "radius", "domain", 0.5));
    }
  } catch (const InvalidArgument& e) {
    fail("domain", e.what());
  }
  fail("domain.type", "expected \"box\" or \"ball\"");
}

Stencil parse_stencil(const json& j, int d) {
  try {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s == "nearest") return Stencil::nearest_neighbour(d);
      if (s == "nearest+diagonal") return Stencil::with_diagonals(d);
      fail("stencil", "expected \"nearest\", \"nearest+diagonal\" or a list of offsets");
    }
    if (!j.is_array()) fail("stencil", "expected a string or a list of offsets");
    std::vector<IVec> offsets;
    for (const json& o : j) {
      if (!o.is_array() || static_cast<int>(o.size()) != d) fail("stencil", "each offset needs " + std::to_string(d) + " integers");
      IVec v(d);
      for (int i = 0; i < d; ++i) {
        if (!o[i].is_number_integer()) fail("stencil", "offsets must be integers");
        v(i) = o[i].get<int>();
      }
      offsets.push_back(v);
    }
    return Stencil(std::move(offsets));
  } catch (const InvalidArgument& e) {
    fail("stencil", e.what());
  }
}

PotentialKind parse_potential(const json& j, double& r_min) {
  if (!j.is_object()) fail("potential", "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) fail("potential.kind", "expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  r_min = number_or(j, "r_min", "potential", 0.3);
  if (r_min < 0.0) fail("potential.r_min", "must be nonnegative");
  if (kind == "harmonic") {
    reject_unknown(j, {"kind", "r_min"}, "potential");
    return Harmonic{};
  }
  if (kind == "lennard_jones") {
    reject_unknown(j, {"kind", "r_min", "well_depth", "sigma"}, "potential");
    LennardJones lj;
    lj.well_depth = number_or(j, "well_depth", "potential", lj.well_depth);
    lj.sigma = number_or(j, "sigma", "potential", lj.sigma);
    if (!(lj.sigma > 0.0)) fail("potential.sigma", "must be positive");
    return lj;
  }
  if (kind == "morse") {
    reject_unknown(j, {"kind", "r_min", "depth", "stiffness", "equilibrium"}, "potential");
    Morse m;
    m.depth = number_or(j, "depth", "potential", m.depth);
    m.stiffness = number_or(j, "stiffness", "potential", m.stiffness);
    m.equilibrium = number_or(j, "equilibrium", "potential", m.equilibrium);
    if (!(m.stiffness > 0.0)) fail("potential.stiffness", "must be positive");
    return m;
  }
  fail("potential.kind", "expected \"harmonic\", \"lennard_jones\" or \"morse\"");
}

SmoothReference parse_reference(const json& j, int d) {
  if (!j.is_object()) fail("reference", "expected an object");
  if (!j.contains("family") || !j.at("family").is_string()) fail("reference.family", "expected a string");
  const std::string family = j.at("family").get<std::string>();
  const Mat I = Mat::Identity(d, d);
  const Vec zero = Vec::Zero(d);
  if (family == "affine_motion") {
    reject_unknown(j, {"family", "F", "b", "velocity", "acceleration"}, "reference");
    return SmoothReference::affine_motion(matrix_or(j, "F", "reference", d, I), vector_or(j, "b", "reference", d, zero),
                                          vector_or(j, "velocity", "reference", d, zero),
                                          vector_or(j, "acceleration", "reference", d, zero));
  }
  if (family == "sinusoidal") {
    reject_unknown(j, {"family", "F", "b", "amplitude", "wavenumber", "omega", "phase"}, "reference");
    Vec amp = Vec::Zero(d);
    amp(0) = 0.02;
    return SmoothReference::sinusoidal(matrix_or(j, "F", "reference", d, I), vector_or(j, "b", "reference", d, zero),
                                       vector_or(j, "amplitude", "reference", d, amp),
                                       vector_or(j, "wavenumber", "reference", d, Vec::Unit(d, 0)),
                                       number_or(j, "omega", "reference", 2.0), number_or(j, "phase", "reference", 0.0));
  }
  if (family == "compressive_ramp") {
    reject_unknown(j, {"family", "F0", "b", "S", "omega"}, "reference");
    return SmoothReference::compressive_ramp(matrix_or(j, "F0", "reference", d, I), vector_or(j, "b", "reference", d, zero),
                                             matrix_or(j, "S", "reference", d, -0.05 * I),
                                             number_or(j, "omega", "reference", 1.0));
  }
  fail("reference.family", "expected \"affine_motion\", \"sinusoidal\" or \"compressive_ramp\"");
}

std::optional<double> optional_number(const json& obj, const std::string& field, const std::string& path) {
  if (!obj.contains(field) || obj.at(field).is_null()) return std::nullopt;
  return number(obj.at(field), path + "." + field);
}

}  // namespace

std::vector<double> default_epsilons(int dimension) {
  if (dimension == 1) return {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  if (dimension == 2) return {1.0 / 8, 1.0 / 16, 1.0 / 32};
  return {1.0 / 8, 1.0 / 16};
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario must be a JSON object");
  reject_unknown(root,
                 {"dimension", "domain", "stencil", "potential", "reference", "epsilons", "T0", "gamma",
                  "perturbation", "integrator", "residual", "stability_map", "garding", "mollifier",
                  "cell_quadrature_order", "dynamic_boundary", "precheck", "output_dir", "seed", "description"},
                 "");

  ScenarioConfig c;
  if (!root.contains("dimension") || !root.at("dimension").is_number_integer()) fail("dimension", "required integer");
  c.dimension = root.at("dimension").get<int>();
  if (c.dimension < 1 || c.dimension > 3) fail("dimension", "must be 1, 2 or 3");
  const int d = c.dimension;

  c.domain = root.contains("domain") ? parse_domain(root.at("domain"), d)
                                     : DomainDescriptor::box(Vec::Zero(d), Vec::Ones(d));
  c.stencil = root.contains("stencil") ? parse_stencil(root.at("stencil"), d) : Stencil::nearest_neighbour(d);
  if (root.contains("potential")) c.potential = parse_potential(root.at("potential"), c.r_min);
  if (!root.contains("reference")) fail("reference", "required");
  c.reference = parse_reference(root.at("reference"), d);

  if (root.contains("epsilons")) {
    const json& e = root.at("epsilons");
    if (!e.is_array() || e.empty()) fail("epsilons", "expected a nonempty array");
    for (const json& v : e) {
      const double eps = number(v, "epsilons");
      if (!(eps > 0.0)) fail("epsilons", "entries must be positive");
      c.epsilons.push_back(eps);
    }
    for (std::size_t i = 1; i < c.epsilons.size(); ++i) {
      if (!(c.epsilons[i] < c.epsilons[i - 1])) fail("epsilons", "must be strictly decreasing");
    }
  } else {
    c.epsilons = default_epsilons(d);
  }

  c.T0 = number_or(root, "T0", "", 1.0);
  if (!(c.T0 > 0.0)) fail("T0", "must be positive");
  c.gamma = number_or(root, "gamma", "", 2.0);
  if (!(c.gamma > 0.5 * d && c.gamma <= 2.0)) fail("gamma", "must lie in (d/2, 2]");
  if (c.gamma <= 0.5 * d + 1.0 / 3.0) {
    c.warnings.push_back("gamma is within 1/(m-1) of d/2 for m = 4; the convergence statement needs more smoothness");
  }
  if (d == 1) c.warnings.push_back("d = 1 runs are outside the theorem hypotheses (d in {2, 3})");

  if (root.contains("perturbation")) {
    const json& p = object_at(root, "perturbation");
    reject_unknown(p, {"C_g", "C_h", "C_f"}, "perturbation");
    c.perturbation.C_g = number_or(p, "C_g", "perturbation", 0.0);
    c.perturbation.C_h = number_or(p, "C_h", "perturbation", 0.0);
    c.perturbation.C_f = number_or(p, "C_f", "perturbation", 0.0);
    if (c.perturbation.C_g < 0 || c.perturbation.C_h < 0 || c.perturbation.C_f < 0) {
      fail("perturbation", "amplitudes must be nonnegative");
    }
  }
  if (root.contains("integrator")) {
    const json& j = object_at(root, "integrator");
    reject_unknown(j, {"scheme", "dt", "dt_factor", "cfl_factor", "sample_stride", "admissibility_guard"}, "integrator");
    if (j.contains("scheme") && j.at("scheme") != "velocity_verlet") fail("integrator.scheme", "only \"velocity_verlet\" is available");
    c.integrator.dt = optional_number(j, "dt", "integrator");
    c.integrator.dt_factor = optional_number(j, "dt_factor", "integrator");
    c.integrator.cfl_factor = number_or(j, "cfl_factor", "integrator", 0.2);
    c.integrator.sample_stride = integer_or(j, "sample_stride", "integrator", 1);
    c.integrator.admissibility_guard = number_or(j, "admissibility_guard", "integrator", 0.0);
    if (c.integrator.dt && !(*c.integrator.dt > 0.0)) fail("integrator.dt", "must be positive");
    if (c.integrator.dt_factor && !(*c.integrator.dt_factor > 0.0)) fail("integrator.dt_factor", "must be positive");
    if (!(c.integrator.cfl_factor > 0.0)) fail("integrator.cfl_factor", "must be positive");
    if (c.integrator.sample_stride < 1) fail("integrator.sample_stride", "must be at least 1");
  }
  if (root.contains("residual")) {
    const json& j = object_at(root, "residual");
    reject_unknown(j, {"time"}, "residual");
    c.residual_time = number_or(j, "time", "residual", c.residual_time);
  }
  if (root.contains("stability_map")) {
    const json& j = object_at(root, "stability_map");
    reject_unknown(j, {"stretch", "shear", "epsilon", "k_grid"}, "stability_map");
    auto range = [&](const std::string& key, double& lo, double& hi, int& n) {
      if (!j.contains(key)) return;
      const json& r = j.at(key);
      if (!r.is_array() || r.size() != 3 || !r[2].is_number_integer()) {
        fail("stability_map." + key, "expected [min, max, count]");
      }
      lo = number(r[0], "stability_map." + key);
      hi = number(r[1], "stability_map." + key);
      n = r[2].get<int>();
      if (n < 1) fail("stability_map." + key, "count must be positive");
    };
    auto& m = c.stability_map;
    range("stretch", m.stretch_min, m.stretch_max, m.stretch_count);
    range("shear", m.shear_min, m.shear_max, m.shear_count);
    m.epsilon = optional_number(j, "epsilon", "stability_map");
    m.k_grid = integer_or(j, "k_grid", "stability_map", 64);
    if (m.k_grid < 2) fail("stability_map.k_grid", "must be at least 2");
  }
  if (root.contains("garding")) {
    const json& j = object_at(root, "garding");
    reject_unknown(j, {"lambda1", "r", "time", "site_samples"}, "garding");
    c.garding.lambda1 = optional_number(j, "lambda1", "garding");
    c.garding.r = number_or(j, "r", "garding", c.garding.r);
    c.garding.time = number_or(j, "time", "garding", 0.0);
    c.garding.site_samples = integer_or(j, "site_samples", "garding", 32);
    if (c.garding.lambda1 && !(*c.garding.lambda1 > 0.0)) fail("garding.lambda1", "must be positive");
    if (!(c.garding.r > 0.0)) fail("garding.r", "must be positive");
  }
  if (root.contains("mollifier")) {
    const json& j = object_at(root, "mollifier");
    reject_unknown(j, {"order"}, "mollifier");
    c.mollifier_order = integer_or(j, "order", "mollifier", 64);
    if (c.mollifier_order < 2 || c.mollifier_order > 256) fail("mollifier.order", "must be in [2, 256]");
  }
  c.cell_quadrature_order = integer_or(root, "cell_quadrature_order", "", 4);
  if (c.cell_quadrature_order < 1 || c.cell_quadrature_order > 32) fail("cell_quadrature_order", "must be in [1, 32]");
  if (root.contains("dynamic_boundary")) {
    const json& j = object_at(root, "dynamic_boundary");
    reject_unknown(j, {"time_step"}, "dynamic_boundary");
    c.dyn_boundary_step = optional_number(j, "time_step", "dynamic_boundary");
    if (c.dyn_boundary_step && !(*c.dyn_boundary_step > 0.0)) fail("dynamic_boundary.time_step", "must be positive");
  }
  if (root.contains("precheck")) {
    const json& j = object_at(root, "precheck");
    reject_unknown(j, {"sites", "times"}, "precheck");
    c.precheck_sites = integer_or(j, "sites", "precheck", 16);
    c.precheck_times = integer_or(j, "times", "precheck", 5);
    if (c.precheck_sites < 1 || c.precheck_times < 1) fail("precheck", "counts must be positive");
  }
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) fail("output_dir", "expected a string");
    c.output_dir = root.at("output_dir").get<std::string>();
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    c.seed = root.at("seed").get<std::uint64_t>();
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace cbdyn
