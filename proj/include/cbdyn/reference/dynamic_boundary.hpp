#pragma once

#include <memory>
#include <vector>

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// Uniform time grid on [0, T0] whose step is the largest value <= `step`
/// that divides T0; at least 3 nodes.
Vec dyn_time_grid(double T0, double step);

/// Time-discrete version of
///   F(z) = |z(0)|^2_l2 + |z(0)|^2_h1 + |z'(0)|^2_l2
///          + int_0^T0 |z|^2_h1 + |z'|^2_h1 + |z''|^2_l2 dt
/// on a uniform grid t_n = n tau:
///   z'(0)            one-sided second-order difference,
///   int |z|^2_h1     trapezoid,
///   int |z'|^2_h1    forward differences on each interval, weight tau,
///   int |z''|^2_l2   central differences at interior nodes, end values
///                    copied from the neighbours, trapezoid.
/// With this choice |z(t_n)|^2_h1 <= F(z) holds exactly for every node.
double dyn_functional(const LatticeDomain& domain, const std::vector<Field>& z, double tau);

struct DynamicBoundaryResult {
  double norm = 0.0;
  Vec times;
  /// K_eps g at every time node.
  std::vector<Field> extension;
};

/// Minimises the discrete functional over fields equal to g on the boundary
/// layer at every node. The normal equations are factorised once so that
/// many boundary signals can be evaluated with one instance.
class DynamicBoundaryNorm {
 public:
  DynamicBoundaryNorm(const LatticeDomain& domain, double T0, double step);
  ~DynamicBoundaryNorm();
  DynamicBoundaryNorm(DynamicBoundaryNorm&&) noexcept;

  const Vec& times() const noexcept { return times_; }
  double tau() const noexcept { return tau_; }

  /// g: one Field per time node; only boundary-layer columns are read.
  /// Throws SolverDiverged if the factorisation failed.
  DynamicBoundaryResult evaluate(const std::vector<Field>& g) const;

 private:
  struct Impl;
  const LatticeDomain* domain_;
  Vec times_;
  double tau_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: time step = eps.
DynamicBoundaryResult dyn_boundary_norm(const LatticeDomain& domain, const std::vector<Field>& g, double T0);

}  // namespace cbdyn
