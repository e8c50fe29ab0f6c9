#include "cbdyn/lattice/harmonic.hpp"

#include <cmath>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/operators.hpp"
#include "cbdyn/lattice/quadratic_form.hpp"

namespace cbdyn {

CgOptions harmonic_cg_options(const LatticeDomain& domain) {
  CgOptions options;
  options.relative_tolerance = 1e-10;
  options.max_iterations = static_cast<int>(
      std::ceil(50.0 * std::pow(static_cast<double>(domain.site_count()), 1.0 / domain.dim())));
  return options;
}

Field harmonic_extension(const LatticeDomain& domain, const Field& boundary) {
  return harmonic_extension(domain, boundary, harmonic_cg_options(domain));
}

Field harmonic_extension(const LatticeDomain& domain, const Field& boundary, const CgOptions& options) {
  if (!boundary.allFinite()) throw InvalidArgument("boundary data must be finite");
  Field lifted = zero_field(domain);
  for (int site : domain.boundary_layer()) lifted.col(site) = boundary.col(site);

  const StencilForm gram = StencilForm::gram(domain);
  const Vec rhs = -pack_interior(domain, gram.apply(lifted));
  Vec x = Vec::Zero(rhs.size());
  const CgResult res =
      conjugate_gradient([&](const Vec& v) { return gram.apply_interior(v); }, rhs, x, options);
  if (!res.converged) {
    throw SolverDiverged("harmonic extension: CG did not reach the tolerance after " +
                             std::to_string(res.iterations) + " iterations",
                         res.relative_residual);
  }
  return lifted + unpack_interior(domain, x);
}

double boundary_norm_static(const LatticeDomain& domain, const Field& boundary) {
  return norm_h1(domain, harmonic_extension(domain, boundary));
}

}  // namespace cbdyn
