#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cbdyn/lattice/stencil.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Open, bounded reference domain. Only boxes and balls are supported so that
/// dist(x, boundary) is exact.
class DomainDescriptor {
 public:
  static DomainDescriptor box(Vec lower, Vec upper);
  static DomainDescriptor ball(Vec center, double radius);

  int dim() const noexcept { return dim_; }
  const std::variant<Box, Ball>& shape() const noexcept { return shape_; }
  bool is_box() const noexcept { return std::holds_alternative<Box>(shape_); }

  /// Signed distance to the boundary, positive inside.
  double signed_distance(const Vec& x) const;
  Vec bounding_lower() const;
  Vec bounding_upper() const;

  /// Points on the boundary with their outward unit normals (columns).
  /// `resolution` controls the sampling density per face / great circle.
  std::pair<Mat, Mat> boundary_samples(int resolution) const;

 private:
  explicit DomainDescriptor(std::variant<Box, Ball> shape);
  std::variant<Box, Ball> shape_;
  int dim_ = 0;
};

/// Sites of Omega ∩ eps Z^d together with the semi-interior, interior and
/// boundary-layer index sets. Site ids follow row-major order of the integer
/// lattice coordinates (first coordinate slowest).
class LatticeDomain {
 public:
  LatticeDomain(DomainDescriptor descriptor, double epsilon, Stencil stencil);

  int dim() const noexcept { return descriptor_.dim(); }
  double epsilon() const noexcept { return epsilon_; }
  /// eps^d
  double cell_volume() const noexcept { return cell_volume_; }
  const DomainDescriptor& descriptor() const noexcept { return descriptor_; }
  const Stencil& stencil() const noexcept { return stencil_; }

  int site_count() const noexcept { return static_cast<int>(coords_.cols()); }
  IVec lattice_coords(int site) const { return coords_.col(site); }
  Vec position(int site) const { return epsilon_ * coords_.col(site).cast<double>(); }
  /// d x N matrix of all site positions.
  const Mat& positions() const noexcept { return positions_; }
  std::optional<int> find(const IVec& coords) const;

  const std::vector<int>& semi_interior() const noexcept { return semi_; }
  const std::vector<int>& interior() const noexcept { return interior_; }
  const std::vector<int>& boundary_layer() const noexcept { return boundary_; }

  bool is_interior(int site) const { return interior_slot_[site] >= 0; }
  bool is_semi_interior(int site) const { return semi_slot_[site] >= 0; }
  /// Position of `site` inside semi_interior(), or -1.
  int semi_slot(int site) const { return semi_slot_[site]; }
  /// Position of `site` inside interior(), or -1.
  int interior_slot(int site) const { return interior_slot_[site]; }

  /// Site id of x + eps*rho for the semi-interior site in slot `semi`.
  int forward_neighbour(int semi, int r) const { return forward_[semi * stencil_.size() + r]; }
  /// Semi-interior slot of x - eps*rho for the interior site in slot `interior`.
  int backward_slot(int interior, int r) const { return backward_[interior * stencil_.size() + r]; }

  /// Integer coordinates of x-hat, the midpoint of the cube z + (-eps/2, eps/2]^d containing x.
  IVec cube_midpoint(const Vec& x) const;

 private:
  DomainDescriptor descriptor_;
  double epsilon_;
  double cell_volume_;
  Stencil stencil_;
  Eigen::MatrixXi coords_;
  Mat positions_;
  IVec grid_lower_;
  IVec grid_extent_;
  std::vector<int> lookup_;
  std::vector<int> semi_, interior_, boundary_;
  std::vector<int> semi_slot_, interior_slot_;
  std::vector<int> forward_, backward_;
};

}  // namespace cbdyn
