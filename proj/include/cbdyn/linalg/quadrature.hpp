#pragma once

#include "cbdyn/types.hpp"

namespace cbdyn {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Vec nodes;
  Vec weights;
};

GaussRule gauss_legendre(int order);

/// Tensor-product rule on [-1, 1]^d: nodes as columns (d x order^d), first
/// coordinate slowest.
struct TensorRule {
  Mat nodes;
  Vec weights;
};

TensorRule tensor_gauss(int dim, int order);

}  // namespace cbdyn
