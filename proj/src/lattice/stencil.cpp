#include "cbdyn/lattice/stencil.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

long long int_det(const std::vector<const IVec*>& cols, int dim) {
  auto at = [&](int i, int j) -> long long { return (*cols[j])(i); };
  switch (dim) {
    case 1:
      return at(0, 0);
    case 2:
      return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    case 3:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    default:
      throw InvalidArgument("stencil dimension must be 1, 2 or 3");
  }
}

void gcd_of_minors(const std::vector<IVec>& offsets, int dim, int start,
                   std::vector<const IVec*>& chosen, long long& g) {
  if (static_cast<int>(chosen.size()) == dim) {
    g = std::gcd(g, std::llabs(int_det(chosen, dim)));
    return;
  }
  for (int i = start; i < static_cast<int>(offsets.size()) && g != 1; ++i) {
    chosen.push_back(&offsets[i]);
    gcd_of_minors(offsets, dim, i + 1, chosen, g);
    chosen.pop_back();
  }
}

}  // namespace

long long lattice_index(const std::vector<IVec>& offsets, int dim) {
  long long g = 0;
  std::vector<const IVec*> chosen;
  gcd_of_minors(offsets, dim, 0, chosen, g);
  return g;
}

Stencil::Stencil(std::vector<IVec> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) throw InvalidArgument("stencil must contain at least one offset");
  dim_ = static_cast<int>(offsets_.front().size());
  if (dim_ < 1 || dim_ > 3) throw InvalidArgument("stencil dimension must be 1, 2 or 3");

  const int n = size();
  opposite_.assign(n, -1);
  offset_matrix_.resize(dim_, n);
  for (int r = 0; r < n; ++r) {
    const IVec& rho = offsets_[r];
    if (rho.size() != dim_) throw InvalidArgument("stencil offsets have mixed dimensions");
    if (rho.isZero()) throw InvalidArgument("0 is not an admissible stencil offset");
    for (int s = 0; s < r; ++s) {
      if (offsets_[s] == rho) throw InvalidArgument("duplicate stencil offset");
    }
    for (int s = 0; s < n; ++s) {
      if (offsets_[s] == -rho) opposite_[r] = s;
    }
    if (opposite_[r] < 0) throw InvalidArgument("stencil is not symmetric (R != -R)");
    offset_matrix_.col(r) = rho.cast<double>();
    r_max_ = std::max(r_max_, offset_matrix_.col(r).norm());
  }
  if (lattice_index(offsets_, dim_) != 1) {
    throw InvalidArgument("stencil offsets do not span Z^" + std::to_string(dim_));
  }
  r0_ = std::max(r_max_, std::sqrt(static_cast<double>(dim_)) / 4.0);
}

Stencil Stencil::nearest_neighbour(int dim) {
  std::vector<IVec> offsets;
  for (int i = 0; i < dim; ++i) {
    IVec e = IVec::Zero(dim);
    e(i) = 1;
    offsets.push_back(e);
    offsets.push_back(-e);
  }
  return Stencil(std::move(offsets));
}

Stencil Stencil::with_diagonals(int dim) {
  std::vector<IVec> offsets;
  int total = 1;
  for (int i = 0; i < dim; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    IVec v(dim);
    int c = code;
    for (int i = dim - 1; i >= 0; --i) {
      v(i) = c % 3 - 1;
      c /= 3;
    }
    if (!v.isZero()) offsets.push_back(v);
  }
  return Stencil(std::move(offsets));
}

}  // namespace cbdyn
