#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// The bilinear form (u, v) -> eps^d sum_{x in sint} K_x[D u(x), D v(x)] with
/// K_x acting on vec(D u(x)) (component index fastest). The domain must
/// outlive the form.
class StencilForm {
 public:
  /// K = identity, i.e. the h^1_eps Gram form.
  static StencilForm gram(const LatticeDomain& domain);
  static StencilForm uniform(const LatticeDomain& domain, Mat coefficient);
  /// One coefficient per semi-interior slot.
  static StencilForm varying(const LatticeDomain& domain, std::vector<Mat> coefficients);

  const LatticeDomain& domain() const noexcept { return *domain_; }

  double evaluate(const Field& u, const Field& v) const;
  double evaluate(const Field& u) const { return evaluate(u, u); }

  /// Field w with w . v = form(u, v) for every v; on interior sites this is
  /// -eps^d div_{R,eps}(K D u).
  Field apply(const Field& u) const;
  /// apply() restricted to interior unknowns (see pack_interior).
  Vec apply_interior(const Vec& packed) const;
  /// The matrix of apply_interior().
  Eigen::SparseMatrix<double> assemble_interior() const;

  /// Smallest / largest eigenvalue of the coefficients over all sites.
  double min_coefficient_eigenvalue() const;
  double max_coefficient_eigenvalue() const;

 private:
  StencilForm(const LatticeDomain& domain, std::vector<Mat> coefficients, bool identity);
  const Mat* coefficient(int semi) const;

  const LatticeDomain* domain_;
  std::vector<Mat> coefficients_;
  bool identity_;
};

}  // namespace cbdyn
