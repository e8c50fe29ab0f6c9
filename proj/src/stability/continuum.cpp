#include "cbdyn/stability/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cbdyn/errors.hpp"
#include "cbdyn/potential/cauchy_born.hpp"

namespace cbdyn {

namespace {

Vec direction_from_angles(int dim, const Vec& angles) {
  Vec eta(dim);
  if (dim == 1) {
    eta(0) = 1.0;
  } else if (dim == 2) {
    eta << std::cos(angles(0)), std::sin(angles(0));
  } else {
    const double t = angles(0), p = angles(1);
    eta << std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t);
  }
  return eta;
}

struct Sample {
  double value;
  Vec angles;
};

}  // namespace

Mat acoustic_matrix(const Mat& cb_hessian, const Vec& eta) {
  const int d = static_cast<int>(eta.size());
  if (cb_hessian.rows() != d * d || cb_hessian.cols() != d * d) {
    throw InvalidArgument("Cauchy-Born Hessian has the wrong size");
  }
  Mat Q = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) s += cb_hessian(i + d * j, k + d * l) * eta(j) * eta(l);
      }
      Q(i, k) = s;
    }
  }
  return 0.5 * (Q + Q.transpose());
}

LegendreHadamardResult lambda_lh_tensor(const Mat& cb_hessian, int dim,
                                        const LegendreHadamardOptions& options) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  if (options.resolution < 2) throw InvalidArgument("eta grid resolution must be at least 2");
  const double pi = std::acos(-1.0);

  auto evaluate = [&](const Vec& angles) {
    Eigen::SelfAdjointEigenSolver<Mat> es(acoustic_matrix(cb_hessian, direction_from_angles(dim, angles)));
    return es.eigenvalues()(0);
  };

  LegendreHadamardResult best;
  if (dim == 1) {
    const Vec angles = Vec::Zero(1);
    best.value = evaluate(angles);
    best.direction = Vec::Ones(1);
    best.polarization = Vec::Ones(1);
    return best;
  }

  const int n_angles = dim - 1;
  Vec h(n_angles);
  std::vector<Sample> samples;
  if (dim == 2) {
    h(0) = pi / options.resolution;
    for (int i = 0; i < options.resolution; ++i) {
      Vec a(1);
      a(0) = i * h(0);
      samples.push_back({evaluate(a), a});
    }
  } else {
    h << pi / options.resolution, pi / options.resolution;
    for (int i = 0; i <= options.resolution; ++i) {
      for (int j = 0; j < 2 * options.resolution; ++j) {
        Vec a(2);
        a << i * h(0), j * h(1);
        samples.push_back({evaluate(a), a});
      }
    }
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.value < b.value; });

  Sample winner = samples.front();
  const int starts = std::min<int>(options.starts, static_cast<int>(samples.size()));
  for (int s = 0; s < starts; ++s) {
    Sample current = samples[s];
    Vec step = h;
    for (int level = 0; level < options.refinement_levels; ++level) {
      // Pattern search over {-1, -1/2, 0, 1/2, 1} * step per angle.
      Sample local = current;
      const int per = 5;
      int combos = 1;
      for (int k = 0; k < n_angles; ++k) combos *= per;
      for (int c = 0; c < combos; ++c) {
        int rest = c;
        Vec a = current.angles;
        for (int k = 0; k < n_angles; ++k) {
          a(k) += (0.5 * (rest % per) - 1.0) * step(k);
          rest /= per;
        }
        const double v = evaluate(a);
        if (v < local.value) local = {v, a};
      }
      current = local;
      step *= 0.5;
    }
    if (current.value < winner.value) winner = current;
  }

  best.value = winner.value;
  best.direction = direction_from_angles(dim, winner.angles);
  Eigen::SelfAdjointEigenSolver<Mat> es(acoustic_matrix(cb_hessian, best.direction));
  best.value = es.eigenvalues()(0);
  best.polarization = es.eigenvectors().col(0);
  return best;
}

LegendreHadamardResult lambda_lh(const SitePotential& potential, const Mat& F,
                                 const LegendreHadamardOptions& options) {
  const CauchyBornJet jet = eval_cauchy_born(potential, F, 2);
  return lambda_lh_tensor(jet.hessian, potential.stencil().dim(), options);
}

}  // namespace cbdyn
