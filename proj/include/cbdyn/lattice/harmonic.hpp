#pragma once

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/linalg/cg.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// Default CG settings for the boundary-constrained Gram system: relative
/// tolerance 1e-10 and at most 50 (site count)^(1/d) iterations.
CgOptions harmonic_cg_options(const LatticeDomain& domain);

/// T_eps g: the unique field equal to g on the boundary layer with
/// div_{R,eps} D_{R,eps} y = 0 on the interior. Only boundary-layer columns of
/// `boundary` are read. Throws SolverDiverged if CG does not converge.
Field harmonic_extension(const LatticeDomain& domain, const Field& boundary);
Field harmonic_extension(const LatticeDomain& domain, const Field& boundary, const CgOptions& options);

/// ||g||_{boundary,0} = ||T_eps g||_{h^1_eps}
double boundary_norm_static(const LatticeDomain& domain, const Field& boundary);

}  // namespace cbdyn
