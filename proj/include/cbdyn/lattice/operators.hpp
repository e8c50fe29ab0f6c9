#pragma once

#include "cbdyn/lattice/domain.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

/// One d x |R| matrix per semi-interior site, stored side by side.
class StencilField {
 public:
  StencilField(int dim, int stencil_size, int semi_count)
      : values_(Mat::Zero(dim, stencil_size * semi_count)), stencil_size_(stencil_size) {}

  int semi_count() const noexcept { return static_cast<int>(values_.cols()) / stencil_size_; }
  auto at(int semi) { return values_.middleCols(semi * stencil_size_, stencil_size_); }
  auto at(int semi) const { return values_.middleCols(semi * stencil_size_, stencil_size_); }
  Mat& values() noexcept { return values_; }
  const Mat& values() const noexcept { return values_; }

 private:
  Mat values_;
  int stencil_size_;
};

Field zero_field(const LatticeDomain& domain);

/// D_{R,eps} y(x) = ((y(x + eps rho) - y(x)) / eps)_rho at a semi-interior site.
Mat discrete_gradient(const LatticeDomain& domain, const Field& y, int site);
StencilField discrete_gradient(const LatticeDomain& domain, const Field& y);

/// div_{R,eps} M(x) = sum_rho (M_rho(x) - M_rho(x - eps rho)) / eps at an interior site.
Vec discrete_divergence(const LatticeDomain& domain, const StencilField& M, int site);
/// Divergence on every interior site; zero on the boundary layer.
Field discrete_divergence(const LatticeDomain& domain, const StencilField& M);

/// eps^d sum over the interior of u.v
double inner_l2(const LatticeDomain& domain, const Field& u, const Field& v);
/// eps^d sum over the semi-interior of D u : D v
double inner_h1(const LatticeDomain& domain, const Field& u, const Field& v);
double norm_l2(const LatticeDomain& domain, const Field& u);
double norm_h1(const LatticeDomain& domain, const Field& u);

/// Interior values stacked site-major (component fastest); the unknowns of
/// every boundary-vanishing problem.
Vec pack_interior(const LatticeDomain& domain, const Field& u);
/// Inverse of pack_interior; zero on the boundary layer.
Field unpack_interior(const LatticeDomain& domain, const Vec& packed);

/// Copy of u with the boundary layer set to zero.
Field zero_boundary(const LatticeDomain& domain, Field u);

}  // namespace cbdyn
