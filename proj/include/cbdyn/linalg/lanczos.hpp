#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cbdyn/errors.hpp"
#include "cbdyn/linalg/cg.hpp"
#include "cbdyn/types.hpp"

namespace cbdyn {

struct LanczosOptions {
  /// Absolute-or-relative tolerance on the eigenvalue: error <= tol * max(1, |lambda|).
  double tolerance = 1e-8;
  int max_steps = 400;
  double inner_tolerance = 1e-12;
  int inner_max_iterations = 200000;
  std::uint64_t seed = 0x5eed1234u;
};

struct LanczosResult {
  /// Rayleigh quotient A[y, y] / B[y, y] of the returned vector.
  double value = 0.0;
  /// Ritz vector normalised to B[y, y] = 1.
  Vec vector;
  int steps = 0;
  long inner_iterations = 0;
  /// |A y - value B y| (Euclidean)
  double residual = 0.0;
};

/// Smallest eigenvalue of the symmetric pencil A u = lambda B u with B
/// positive definite, by shift-invert Lanczos on (A - sigma B)^{-1} B in the
/// B-inner product with full reorthogonalisation. `sigma` must lie strictly
/// below the smallest eigenvalue so that the inner CG solves see an SPD
/// operator. Throws SolverStalled when the outer or an inner iteration fails.
template <class ApplyA, class ApplyB>
LanczosResult smallest_generalized_eigenpair(const ApplyA& apply_a, const ApplyB& apply_b, int n,
                                             double sigma, const LanczosOptions& options = {}) {
  if (n <= 0) throw InvalidArgument("eigenproblem has no unknowns");
  auto shifted = [&](const Vec& v) -> Vec { return apply_a(v) - sigma * apply_b(v); };
  CgOptions cg{options.inner_tolerance, options.inner_max_iterations};

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);

  const int max_steps = std::min(options.max_steps, n);
  std::vector<Vec> basis;
  std::vector<Vec> b_basis;
  std::vector<double> alpha, beta;
  LanczosResult result;

  Vec bv = apply_b(v);
  double nrm = std::sqrt(v.dot(bv));
  basis.push_back(v / nrm);
  b_basis.push_back(bv / nrm);

  double theta = 0.0;
  Vec ritz_coeffs;
  bool converged = false;
  for (int j = 0; j < max_steps; ++j) {
    Vec w = Vec::Zero(n);
    const CgResult inner = conjugate_gradient(shifted, b_basis[j], w, cg);
    result.inner_iterations += inner.iterations;
    if (!inner.converged) {
      throw SolverStalled("inner CG solve failed (relative residual " +
                          std::to_string(inner.relative_residual) + " after " +
                          std::to_string(inner.iterations) + " iterations)");
    }
    const double a = w.dot(b_basis[j]);
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt in the B-inner product.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < basis.size(); ++i) w -= w.dot(b_basis[i]) * basis[i];
    }
    const Vec bw = apply_b(w);
    const double b = std::sqrt(std::max(0.0, w.dot(bw)));

    const int m = j + 1;
    Mat T = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Mat> tri(T);
    theta = tri.eigenvalues()(m - 1);
    ritz_coeffs = tri.eigenvectors().col(m - 1);
    const double r = std::abs(b * ritz_coeffs(m - 1));
    // The r^2/gap bound needs a second Ritz value to estimate the gap.
    const double dtheta =
        m >= 2 ? std::min(r, r * r / std::max(theta - tri.eigenvalues()(m - 2), std::numeric_limits<double>::min()))
               : r;
    if (!(theta > 0.0)) throw SolverStalled("shift is not below the spectrum");
    const double lambda = sigma + 1.0 / theta;
    result.steps = m;
    if (dtheta / (theta * theta) <= options.tolerance * std::max(1.0, std::abs(lambda)) ||
        b <= 1e-14 * theta) {
      converged = true;
      break;
    }
    beta.push_back(b);
    basis.push_back(w / b);
    b_basis.push_back(bw / b);
  }
  if (!converged) {
    throw SolverStalled("Lanczos did not converge in " + std::to_string(result.steps) +
                        " steps (current estimate " + std::to_string(sigma + 1.0 / theta) + ")");
  }

  Vec y = Vec::Zero(n);
  for (int i = 0; i < ritz_coeffs.size(); ++i) y += ritz_coeffs(i) * basis[i];
  const Vec ay = apply_a(y);
  const Vec by = apply_b(y);
  const double byy = y.dot(by);
  result.value = y.dot(ay) / byy;
  const double scale = 1.0 / std::sqrt(byy);
  result.vector = y * scale;
  result.residual = (ay - result.value * by).norm() * scale;
  return result;
}

}  // namespace cbdyn
