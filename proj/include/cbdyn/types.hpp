#pragma once

#include <Eigen/Dense>

namespace cbdyn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;

/// Vector-valued data on lattice sites: column `id` holds the value at site `id`.
using Field = Eigen::MatrixXd;

}  // namespace cbdyn
