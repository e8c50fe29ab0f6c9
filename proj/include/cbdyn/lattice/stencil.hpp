#pragma once

#include <vector>

#include "cbdyn/types.hpp"

namespace cbdyn {

/// Finite interaction range R in Z^d \ {0}. Construction enforces R = -R and
/// that the offsets generate Z^d as a group.
class Stencil {
 public:
  explicit Stencil(std::vector<IVec> offsets);

  /// {+-e_1, ..., +-e_d}
  static Stencil nearest_neighbour(int dim);
  /// All nonzero vectors of {-1, 0, 1}^d.
  static Stencil with_diagonals(int dim);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(offsets_.size()); }
  const IVec& offset(int r) const { return offsets_[r]; }
  const std::vector<IVec>& offsets() const noexcept { return offsets_; }
  /// d x |R| matrix whose columns are the offsets.
  const Mat& offset_matrix() const noexcept { return offset_matrix_; }
  /// Index of -rho for the offset with index r.
  int opposite(int r) const { return opposite_[r]; }

  double r_max() const noexcept { return r_max_; }
  /// max(R_max, sqrt(d)/4)
  double r0() const noexcept { return r0_; }

 private:
  int dim_ = 0;
  std::vector<IVec> offsets_;
  std::vector<int> opposite_;
  Mat offset_matrix_;
  double r_max_ = 0.0;
  double r0_ = 0.0;
};

/// gcd of all d x d minors of the offset matrix; the offsets span Z^d iff this is 1.
long long lattice_index(const std::vector<IVec>& offsets, int dim);

}  // namespace cbdyn
