#include "cbdyn/stability/fourier.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "cbdyn/errors.hpp"
#include "cbdyn/potential/cauchy_born.hpp"

namespace cbdyn {

FourierSymbol::FourierSymbol(const Stencil& stencil, const Mat& K)
    : offsets_(stencil.offset_matrix()), dim_(stencil.dim()), size_(stencil.size()) {
  const int d = dim_, nr = size_;
  if (K.rows() != d * nr || K.cols() != d * nr) throw InvalidArgument("stability tensor has the wrong size");
  reduced_ = Mat::Zero(d * d, nr * nr);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int r = 0; r < nr; ++r) {
        for (int q = 0; q < nr; ++q) reduced_(i + d * j, r + nr * q) = K(i + d * r, j + d * q);
      }
    }
  }
}

Vec FourierSymbol::c(const Vec& k) const {
  return ((offsets_.transpose() * k).array().cos() - 1.0).matrix();
}

Vec FourierSymbol::s(const Vec& k) const { return (offsets_.transpose() * k).array().sin().matrix(); }

Mat FourierSymbol::matrix(const Vec& k) const {
  if (k.size() != dim_) throw InvalidArgument("wave vector has the wrong dimension");
  const Vec cv = c(k), sv = s(k);
  const double denom = cv.squaredNorm() + sv.squaredNorm();
  if (!(denom > 1e-30)) throw DegenerateWavevector("|c(k)|^2 + |s(k)|^2 underflows");
  const Mat outer = cv * cv.transpose() + sv * sv.transpose();
  const Vec flat = reduced_ * Eigen::Map<const Vec>(outer.data(), outer.size());
  Mat N = Eigen::Map<const Mat>(flat.data(), dim_, dim_) / denom;
  return 0.5 * (N + N.transpose());
}

double FourierSymbol::min_eigenvalue(const Vec& k) const {
  const Mat N = matrix(k);
  if (dim_ == 1) return N(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(N, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat limit_probe_directions(int dim) {
  Mat dirs(dim, 8);
  const double pi = std::acos(-1.0);
  for (int j = 0; j < 8; ++j) {
    if (dim == 1) {
      dirs(0, j) = j % 2 == 0 ? 1.0 : -1.0;
    } else if (dim == 2) {
      dirs(0, j) = std::cos(j * pi / 8);
      dirs(1, j) = std::sin(j * pi / 8);
    }
  }
  if (dim == 3) {
    dirs << 1, 0, 0, 1, 1, 0, 1, 1,
            0, 1, 0, 1, 0, 1, 1, -1,
            0, 0, 1, 0, 1, 1, 1, 0;
    dirs.colwise().normalize();
  }
  return dirs;
}

Mat limit_scan_directions(int dim, int resolution) {
  const double pi = std::acos(-1.0);
  // N(-k) = N(k), so a half sphere suffices.
  if (dim == 2) {
    Mat dirs(2, resolution);
    for (int j = 0; j < resolution; ++j) {
      dirs(0, j) = std::cos(j * pi / resolution);
      dirs(1, j) = std::sin(j * pi / resolution);
    }
    return dirs;
  }
  if (dim == 3) {
    const int polar = std::max(2, resolution / 2);
    Mat dirs(3, polar * resolution);
    for (int i = 0; i < polar; ++i) {
      const double theta = (i + 0.5) * 0.5 * pi / polar;
      for (int j = 0; j < resolution; ++j) {
        const double phi = 2.0 * j * pi / resolution;
        dirs.col(i * resolution + j) << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta);
      }
    }
    return dirs;
  }
  return limit_probe_directions(dim);
}

AtomFourierResult lambda_atom_fourier(const Stencil& stencil, const Mat& K, const AtomFourierOptions& options) {
  if (options.grid < 2) throw InvalidArgument("k-grid must have at least 2 points per dimension");
  const FourierSymbol symbol(stencil, 0.5 * (K + K.transpose()));
  const int d = stencil.dim();
  const double pi = std::acos(-1.0);
  const double h = 2.0 * pi / options.grid;

  long count = 1;
  for (int k = 0; k < d; ++k) count *= options.grid;
  double best = std::numeric_limits<double>::infinity();
  Vec best_k = Vec::Zero(d);
  Vec k(d);
  for (long idx = 1; idx < count; ++idx) {
    long rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      k(a) = h * static_cast<double>(rest % options.grid);
      rest /= options.grid;
    }
    const double v = symbol.min_eigenvalue(k);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }

  // Bisection refinement: probe the 3^d - 1 neighbours at +-step, halve.
  double step = 0.5 * h;
  int neighbours = 1;
  for (int a = 0; a < d; ++a) neighbours *= 3;
  for (int level = 0; level < options.refinement_levels; ++level) {
    Vec centre = best_k;
    for (int n = 0; n < neighbours; ++n) {
      int rest = n;
      Vec trial = centre;
      bool is_centre = true;
      for (int a = 0; a < d; ++a) {
        const int o = rest % 3 - 1;
        rest /= 3;
        trial(a) += o * step;
        if (o != 0) is_centre = false;
      }
      if (is_centre) continue;
      // The symbol is 2 pi periodic, so only the origin (mod 2 pi) is excluded.
      Vec wrapped = trial.unaryExpr([&](double x) { return std::remainder(x, 2.0 * pi); });
      if (wrapped.norm() < 1e-14) continue;
      const double v = symbol.min_eigenvalue(trial);
      if (v < best) {
        best = v;
        best_k = trial;
      }
    }
    step *= 0.5;
  }

  AtomFourierResult result;
  result.grid_value = best;
  result.limit_value = std::numeric_limits<double>::infinity();
  Vec limit_k = Vec::Zero(d);
  if (options.limit_probes) {
    auto probe = [&](const Vec& kk) {
      const double v = symbol.min_eigenvalue(kk);
      if (v < result.limit_value) {
        result.limit_value = v;
        limit_k = kk;
      }
    };
    const Mat dirs = limit_probe_directions(d);
    for (int j = 0; j < dirs.cols(); ++j) {
      for (int e = options.probe_min_exponent; e <= options.probe_max_exponent; ++e) {
        probe(std::ldexp(1.0, -e) * dirs.col(j));
      }
    }
    // The limit is a function of the direction alone, and its minimum can sit
    // between the fixed probes: scan directions at the smallest radius, then
    // refine the best one along the tangent plane.
    const double radius = std::ldexp(1.0, -options.probe_max_exponent);
    if (d >= 2) {
      const Mat scan = limit_scan_directions(d, options.grid);
      for (int j = 0; j < scan.cols(); ++j) probe(radius * scan.col(j));
      double tstep = pi / options.grid;
      int offsets = 1;
      for (int a = 1; a < d; ++a) offsets *= 3;
      for (int level = 0; level < 40; ++level) {
        const Vec eta = limit_k.normalized();
        const Mat tangent = Eigen::HouseholderQR<Mat>(eta).householderQ() * Mat::Identity(d, d).rightCols(d - 1);
        for (int n = 0; n < offsets; ++n) {
          int rest = n;
          Vec trial = eta;
          for (int a = 0; a < d - 1; ++a) {
            trial += (rest % 3 - 1) * tstep * tangent.col(a);
            rest /= 3;
          }
          probe(radius * trial.normalized());
        }
        tstep *= 0.5;
      }
    }
  }
  result.limit_probe_won = result.limit_value < result.grid_value;
  result.wavevector = result.limit_probe_won ? limit_k : best_k;
  const Mat N = symbol.matrix(result.wavevector);
  Eigen::SelfAdjointEigenSolver<Mat> es(N);
  result.value = es.eigenvalues()(0);
  result.polarization = es.eigenvectors().col(0);
  return result;
}

AtomFourierResult lambda_atom(const SitePotential& potential, const Mat& F, const AtomFourierOptions& options) {
  const Mat K = potential.hessian(homogeneous_bonds(potential.stencil(), F));
  return lambda_atom_fourier(potential.stencil(), K, options);
}

}  // namespace cbdyn
