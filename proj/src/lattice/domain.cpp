#include "cbdyn/lattice/domain.hpp"

#include <cmath>
#include <numbers>

#include "cbdyn/errors.hpp"

namespace cbdyn {

namespace {

// Sites whose distance equals a threshold up to rounding are treated as lying
// on it (and hence excluded from the strict inequality).
bool strictly_greater(double distance, double threshold) {
  return distance > threshold + 1e-12 * std::max(1.0, std::abs(threshold));
}

}  // namespace

DomainDescriptor::DomainDescriptor(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {}

DomainDescriptor DomainDescriptor::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > 3) {
    throw InvalidArgument("box corners must have matching dimension 1..3");
  }
  if ((upper.array() <= lower.array()).any()) throw InvalidArgument("box is empty");
  DomainDescriptor d(Box{std::move(lower), std::move(upper)});
  d.dim_ = static_cast<int>(std::get<Box>(d.shape_).lower.size());
  return d;
}

DomainDescriptor DomainDescriptor::ball(Vec center, double radius) {
  if (center.size() < 1 || center.size() > 3) throw InvalidArgument("ball dimension must be 1..3");
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  DomainDescriptor d(Ball{std::move(center), radius});
  d.dim_ = static_cast<int>(std::get<Ball>(d.shape_).center.size());
  return d;
}

double DomainDescriptor::signed_distance(const Vec& x) const {
  if (const auto* b = std::get_if<Box>(&shape_)) {
    return std::min((x - b->lower).minCoeff(), (b->upper - x).minCoeff());
  }
  const auto& ball = std::get<Ball>(shape_);
  return ball.radius - (x - ball.center).norm();
}

Vec DomainDescriptor::bounding_lower() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->lower;
  const auto& ball = std::get<Ball>(shape_);
  return ball.center.array() - ball.radius;
}

Vec DomainDescriptor::bounding_upper() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->upper;
  const auto& ball = std::get<Ball>(shape_);
  return ball.center.array() + ball.radius;
}

std::pair<Mat, Mat> DomainDescriptor::boundary_samples(int resolution) const {
  resolution = std::max(resolution, 1);
  std::vector<Vec> points, normals;
  if (const auto* b = std::get_if<Box>(&shape_)) {
    // Tensor grid of face-interior points on each of the 2d faces.
    for (int axis = 0; axis < dim_; ++axis) {
      for (int side = 0; side < 2; ++side) {
        int count = 1;
        for (int k = 0; k < dim_ - 1; ++k) count *= resolution;
        for (int idx = 0; idx < count; ++idx) {
          Vec p(dim_);
          int c = idx;
          for (int k = 0; k < dim_; ++k) {
            if (k == axis) continue;
            const int j = c % resolution;
            c /= resolution;
            p(k) = b->lower(k) + (b->upper(k) - b->lower(k)) * (j + 0.5) / resolution;
          }
          p(axis) = side == 0 ? b->lower(axis) : b->upper(axis);
          Vec n = Vec::Zero(dim_);
          n(axis) = side == 0 ? -1.0 : 1.0;
          points.push_back(p);
          normals.push_back(n);
        }
      }
    }
  } else {
    const auto& ball = std::get<Ball>(shape_);
    auto push = [&](const Vec& n) {
      points.push_back(ball.center + ball.radius * n);
      normals.push_back(n);
    };
    if (dim_ == 1) {
      push(Vec::Constant(1, -1.0));
      push(Vec::Constant(1, 1.0));
    } else if (dim_ == 2) {
      const int m = 4 * resolution;
      for (int j = 0; j < m; ++j) {
        const double a = 2.0 * std::numbers::pi * j / m;
        push(Vec{{std::cos(a), std::sin(a)}});
      }
    } else {
      // Fibonacci sphere.
      const int m = 4 * resolution * resolution;
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int j = 0; j < m; ++j) {
        const double z = 1.0 - 2.0 * (j + 0.5) / m;
        const double rr = std::sqrt(1.0 - z * z);
        push(Vec{{rr * std::cos(golden * j), rr * std::sin(golden * j), z}});
      }
    }
  }
  Mat P(dim_, points.size()), N(dim_, normals.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    P.col(j) = points[j];
    N.col(j) = normals[j];
  }
  return {P, N};
}

LatticeDomain::LatticeDomain(DomainDescriptor descriptor, double epsilon, Stencil stencil)
    : descriptor_(std::move(descriptor)), epsilon_(epsilon), stencil_(std::move(stencil)) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) throw InvalidArgument("epsilon must be positive");
  const int d = descriptor_.dim();
  if (stencil_.dim() != d) throw InvalidArgument("stencil and domain dimensions differ");
  cell_volume_ = std::pow(epsilon_, d);

  const Vec lo = descriptor_.bounding_lower();
  const Vec hi = descriptor_.bounding_upper();
  grid_lower_.resize(d);
  grid_extent_.resize(d);
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    const long long a = static_cast<long long>(std::ceil(lo(i) / epsilon_));
    const long long b = static_cast<long long>(std::floor(hi(i) / epsilon_));
    grid_lower_(i) = static_cast<int>(a);
    grid_extent_(i) = static_cast<int>(std::max(0LL, b - a + 1));
    total *= grid_extent_(i);
  }
  if (total > 50'000'000LL) throw InvalidArgument("lattice too large for this epsilon");
  lookup_.assign(static_cast<std::size_t>(total), -1);

  const double semi_threshold = epsilon_ * stencil_.r0();
  const double interior_threshold = 2.0 * epsilon_ * stencil_.r0();

  std::vector<IVec> coords;
  std::vector<int> category;  // 0 boundary-only, 1 semi, 2 interior
  IVec z(d);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = d - 1; i >= 0; --i) {
      z(i) = grid_lower_(i) + static_cast<int>(c % grid_extent_(i));
      c /= grid_extent_(i);
    }
    const Vec x = epsilon_ * z.cast<double>();
    const double dist = descriptor_.signed_distance(x);
    if (!strictly_greater(dist, 0.0)) continue;
    lookup_[code] = static_cast<int>(coords.size());
    coords.push_back(z);
    category.push_back(strictly_greater(dist, interior_threshold) ? 2
                       : strictly_greater(dist, semi_threshold)   ? 1
                                                                  : 0);
  }

  const int n = static_cast<int>(coords.size());
  coords_.resize(d, n);
  for (int s = 0; s < n; ++s) coords_.col(s) = coords[s];
  positions_ = epsilon_ * coords_.cast<double>();

  semi_slot_.assign(n, -1);
  interior_slot_.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (category[s] >= 1) {
      semi_slot_[s] = static_cast<int>(semi_.size());
      semi_.push_back(s);
    }
    if (category[s] == 2) {
      interior_slot_[s] = static_cast<int>(interior_.size());
      interior_.push_back(s);
    } else {
      boundary_.push_back(s);
    }
  }
  if (interior_.empty()) {
    throw EmptyInterior("no interior lattice site at epsilon = " + std::to_string(epsilon_) +
                        "; epsilon is too large for the domain");
  }

  const int nr = stencil_.size();
  forward_.assign(semi_.size() * nr, -1);
  for (std::size_t k = 0; k < semi_.size(); ++k) {
    for (int r = 0; r < nr; ++r) {
      const auto nb = find(coords_.col(semi_[k]) + stencil_.offset(r));
      if (!nb) throw InvalidArgument("internal: semi-interior neighbour outside the lattice");
      forward_[k * nr + r] = *nb;
    }
  }
  backward_.assign(interior_.size() * nr, -1);
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    for (int r = 0; r < nr; ++r) {
      const auto nb = find(coords_.col(interior_[k]) - stencil_.offset(r));
      if (!nb || semi_slot_[*nb] < 0) {
        throw InvalidArgument("internal: interior back-neighbour is not semi-interior");
      }
      backward_[k * nr + r] = semi_slot_[*nb];
    }
  }
}

std::optional<int> LatticeDomain::find(const IVec& z) const {
  long long code = 0;
  for (int i = 0; i < dim(); ++i) {
    const int j = z(i) - grid_lower_(i);
    if (j < 0 || j >= grid_extent_(i)) return std::nullopt;
    code = code * grid_extent_(i) + j;
  }
  const int id = lookup_[static_cast<std::size_t>(code)];
  if (id < 0) return std::nullopt;
  return id;
}

IVec LatticeDomain::cube_midpoint(const Vec& x) const {
  IVec z(dim());
  for (int i = 0; i < dim(); ++i) z(i) = static_cast<int>(std::ceil(x(i) / epsilon_ - 0.5));
  return z;
}

}  // namespace cbdyn
