#pragma once

#include <cmath>

#include "cbdyn/types.hpp"

namespace cbdyn {

struct CgOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 1000;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients for a symmetric positive definite operator given as a
/// callable `apply(const Vec&) -> Vec`. `x` holds the initial guess on entry.
template <class Apply>
CgResult conjugate_gradient(const Apply& apply, const Vec& b, Vec& x, const CgOptions& options) {
  CgResult result;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    result.converged = true;
    return result;
  }
  if (x.size() != b.size()) x = Vec::Zero(b.size());
  Vec r = b - apply(x);
  Vec p = r;
  double rr = r.squaredNorm();
  const double target = options.relative_tolerance * bnorm;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (std::sqrt(rr) <= target) {
      result.iterations = it;
      result.relative_residual = std::sqrt(rr) / bnorm;
      result.converged = true;
      return result;
    }
    const Vec ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    result.iterations = it + 1;
  }
  result.relative_residual = std::sqrt(rr) / bnorm;
  result.converged = std::sqrt(rr) <= target;
  return result;
}

}  // namespace cbdyn
