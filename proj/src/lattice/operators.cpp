#include "cbdyn/lattice/operators.hpp"

#include <string>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

void check_field(const LatticeDomain& domain, const Field& y) {
  if (y.rows() != domain.dim() || y.cols() != domain.site_count()) {
    throw InvalidArgument("field shape does not match the lattice domain");
  }
}

}  // namespace

Field zero_field(const LatticeDomain& domain) { return Field::Zero(domain.dim(), domain.site_count()); }

Mat discrete_gradient(const LatticeDomain& domain, const Field& y, int site) {
  check_field(domain, y);
  if (site < 0 || site >= domain.site_count() || !domain.is_semi_interior(site)) {
    throw OutOfRange("site " + std::to_string(site) + " is not in the semi-interior");
  }
  const int slot = domain.semi_slot(site);
  const int nr = domain.stencil().size();
  Mat g(domain.dim(), nr);
  for (int r = 0; r < nr; ++r) {
    g.col(r) = (y.col(domain.forward_neighbour(slot, r)) - y.col(site)) / domain.epsilon();
  }
  return g;
}

StencilField discrete_gradient(const LatticeDomain& domain, const Field& y) {
  check_field(domain, y);
  const auto& semi = domain.semi_interior();
  const int nr = domain.stencil().size();
  const double inv = 1.0 / domain.epsilon();
  StencilField out(domain.dim(), nr, static_cast<int>(semi.size()));
  for (std::size_t k = 0; k < semi.size(); ++k) {
    auto block = out.at(static_cast<int>(k));
    for (int r = 0; r < nr; ++r) {
      block.col(r) = (y.col(domain.forward_neighbour(static_cast<int>(k), r)) - y.col(semi[k])) * inv;
    }
  }
  return out;
}

Vec discrete_divergence(const LatticeDomain& domain, const StencilField& M, int site) {
  if (site < 0 || site >= domain.site_count() || !domain.is_interior(site)) {
    throw OutOfRange("site " + std::to_string(site) + " is not in the interior");
  }
  if (M.semi_count() != static_cast<int>(domain.semi_interior().size())) {
    throw InvalidArgument("stencil field does not match the semi-interior");
  }
  const int slot = domain.interior_slot(site);
  const int here = domain.semi_slot(site);
  const int nr = domain.stencil().size();
  Vec out = Vec::Zero(domain.dim());
  for (int r = 0; r < nr; ++r) {
    out += M.at(here).col(r) - M.at(domain.backward_slot(slot, r)).col(r);
  }
  return out / domain.epsilon();
}

Field discrete_divergence(const LatticeDomain& domain, const StencilField& M) {
  Field out = zero_field(domain);
  for (int site : domain.interior()) out.col(site) = discrete_divergence(domain, M, site);
  return out;
}

double inner_l2(const LatticeDomain& domain, const Field& u, const Field& v) {
  check_field(domain, u);
  check_field(domain, v);
  double sum = 0.0;
  for (int site : domain.interior()) sum += u.col(site).dot(v.col(site));
  return domain.cell_volume() * sum;
}

double inner_h1(const LatticeDomain& domain, const Field& u, const Field& v) {
  const StencilField du = discrete_gradient(domain, u);
  const StencilField dv = discrete_gradient(domain, v);
  // Fixed summation order: site by site.
  double sum = 0.0;
  for (int k = 0; k < du.semi_count(); ++k) sum += du.at(k).cwiseProduct(dv.at(k)).sum();
  return domain.cell_volume() * sum;
}

double norm_l2(const LatticeDomain& domain, const Field& u) { return std::sqrt(inner_l2(domain, u, u)); }

double norm_h1(const LatticeDomain& domain, const Field& u) {
  const StencilField du = discrete_gradient(domain, u);
  double sum = 0.0;
  for (int k = 0; k < du.semi_count(); ++k) sum += du.at(k).squaredNorm();
  return std::sqrt(domain.cell_volume() * sum);
}

Vec pack_interior(const LatticeDomain& domain, const Field& u) {
  check_field(domain, u);
  const int d = domain.dim();
  const auto& interior = domain.interior();
  Vec out(d * interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) out.segment(d * k, d) = u.col(interior[k]);
  return out;
}

Field unpack_interior(const LatticeDomain& domain, const Vec& packed) {
  const int d = domain.dim();
  const auto& interior = domain.interior();
  if (packed.size() != static_cast<Eigen::Index>(d * interior.size())) {
    throw InvalidArgument("packed vector does not match the interior");
  }
  Field out = zero_field(domain);
  for (std::size_t k = 0; k < interior.size(); ++k) out.col(interior[k]) = packed.segment(d * k, d);
  return out;
}

Field zero_boundary(const LatticeDomain& domain, Field u) {
  check_field(domain, u);
  for (int site : domain.boundary_layer()) u.col(site).setZero();
  return u;
}

}  // namespace cbdyn
