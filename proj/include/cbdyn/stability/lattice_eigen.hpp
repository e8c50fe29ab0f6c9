#pragma once

#include <cstdint>
#include <vector>

#include "cbdyn/lattice/quadratic_form.hpp"
#include "cbdyn/linalg/lanczos.hpp"
#include "cbdyn/stability/fourier.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct LatticeEigenResult {
  double value = 0.0;
  /// Minimising field, zero on the boundary layer, ||u||_{h1} = 1.
  Field vector;
  /// Factorised shifts (assembled path) or Lanczos steps (matrix-free path).
  int steps = 0;
  /// Inverse-iteration solves or inner CG iterations.
  long inner_iterations = 0;
  double residual = 0.0;
};

/// lambda_eps(K, Omega) = inf Q(u) / ||u||^2_{h1} over boundary-vanishing u,
/// with Q the form of `form`. Up to 1e5 unknowns the pencil is assembled and
/// the eigenvalue is bracketed by Cholesky-certified shifts; larger problems
/// use matrix-free shift-invert Lanczos with CG inner solves. Throws SolverStalled.
LatticeEigenResult lambda_eps(const StencilForm& form, const LanczosOptions& options = {});
LatticeEigenResult lambda_eps(const LatticeDomain& domain, const Mat& K, const LanczosOptions& options = {});

/// mu = inf (Q(u) - lambda1/2 ||u||^2_{h1}) / ||u||^2_{l2} over boundary-vanishing u,
/// without any hypothesis checks.
LatticeEigenResult garding_shifted_minimum(const StencilForm& form, double lambda1,
                                           const LanczosOptions& options = {});

struct GardingOptions {
  /// Semi-interior sites on which lambda_atom(A(x)) >= lambda1 is checked.
  int site_samples = 32;
  /// Pairs for the oscillation check; the check is exhaustive when the
  /// number of close pairs does not exceed this.
  long pair_samples = 200000;
  std::uint64_t seed = 0x9a7d1u;
  AtomFourierOptions fourier{};
  LanczosOptions eigen{};
};

struct GardingResult {
  double lambda2_star = 0.0;
  double mu = 0.0;
  double min_sampled_lambda_atom = 0.0;
  double max_oscillation = 0.0;
  LatticeEigenResult eigen;
};

/// lambda2* = r^2 max(0, -mu) for the coefficient field A (one tensor per
/// semi-interior slot). Checks lambda_atom(A(x)) >= lambda1 on sampled sites
/// and |A(x) - A(x')| <= lambda1/4 (spectral norm) whenever
/// |x - x'| <= 2r + 2 eps R_max. Throws HypothesisViolated.
GardingResult garding_verify(const LatticeDomain& domain, const std::vector<Mat>& coefficients,
                             double lambda1, double r, const GardingOptions& options = {});

}  // namespace cbdyn
