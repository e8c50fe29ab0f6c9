#pragma once

#include "cbdyn/lattice/stencil.hpp"
#include "cbdyn/potential/site_potential.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct AtomFourierOptions {
  /// Grid points per dimension on [0, 2 pi)^d (the origin is skipped).
  int grid = 64;
  int refinement_levels = 3;
  /// Long-wavelength probes along 8 fixed directions with |k| = 2^-j, plus a
  /// direction scan (`grid` directions per angle) at the smallest radius with
  /// local refinement of the best direction.
  bool limit_probes = true;
  int probe_min_exponent = 4;
  int probe_max_exponent = 12;
};

struct AtomFourierResult {
  double value = 0.0;
  Vec wavevector;
  Vec polarization;
  /// Best value over the grid and its refinement only.
  double grid_value = 0.0;
  /// Best value over the k -> 0 probes (infinity if disabled).
  double limit_value = 0.0;
  /// The reported minimum came from a k -> 0 probe.
  bool limit_probe_won = false;
};

/// N(k) evaluator for a stability tensor K on R^{d x R} (acting on vec, component fastest).
class FourierSymbol {
 public:
  FourierSymbol(const Stencil& stencil, const Mat& K);

  /// c(k)_rho = cos(rho.k) - 1
  Vec c(const Vec& k) const;
  /// s(k)_rho = sin(rho.k)
  Vec s(const Vec& k) const;
  /// N(k)_ij = (K[e_i (x) c, e_j (x) c] + K[e_i (x) s, e_j (x) s]) / (|c|^2 + |s|^2).
  /// Throws DegenerateWavevector when the denominator underflows.
  Mat matrix(const Vec& k) const;
  double min_eigenvalue(const Vec& k) const;
  int dim() const noexcept { return dim_; }

 private:
  Mat offsets_;
  Mat reduced_;  // (d*d) x (|R|*|R|): N_ij = reduced_(i + d j, :) . vec(c c^T + s s^T)
  int dim_;
  int size_;
};

/// lambda_atom(K) = inf over k != 0 and unit xi of the Fourier quotient.
AtomFourierResult lambda_atom_fourier(const Stencil& stencil, const Mat& K,
                                      const AtomFourierOptions& options = {});
/// lambda_atom(D^2 W_atom((F rho)_rho)).
AtomFourierResult lambda_atom(const SitePotential& potential, const Mat& F,
                              const AtomFourierOptions& options = {});

/// The 8 fixed unit directions used by the long-wavelength probes.
Mat limit_probe_directions(int dim);

/// Unit directions covering a half sphere, `resolution` per angle (d = 2, 3).
Mat limit_scan_directions(int dim, int resolution);

}  // namespace cbdyn
