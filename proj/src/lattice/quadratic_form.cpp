#include "cbdyn/lattice/quadratic_form.hpp"

#include <limits>
#include <utility>
#include <vector>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/operators.hpp"

namespace cbdyn {

StencilForm::StencilForm(const LatticeDomain& domain, std::vector<Mat> coefficients, bool identity)
    : domain_(&domain), coefficients_(std::move(coefficients)), identity_(identity) {
  const int n = domain.dim() * domain.stencil().size();
  for (const Mat& k : coefficients_) {
    if (k.rows() != n || k.cols() != n) throw InvalidArgument("stencil form coefficient has the wrong size");
  }
}

StencilForm StencilForm::gram(const LatticeDomain& domain) { return StencilForm(domain, {}, true); }

StencilForm StencilForm::uniform(const LatticeDomain& domain, Mat coefficient) {
  return StencilForm(domain, {std::move(coefficient)}, false);
}

StencilForm StencilForm::varying(const LatticeDomain& domain, std::vector<Mat> coefficients) {
  if (coefficients.size() != domain.semi_interior().size()) {
    throw InvalidArgument("need one coefficient per semi-interior site");
  }
  return StencilForm(domain, std::move(coefficients), false);
}

const Mat* StencilForm::coefficient(int semi) const {
  if (identity_) return nullptr;
  return coefficients_.size() == 1 ? &coefficients_.front() : &coefficients_[semi];
}

double StencilForm::evaluate(const Field& u, const Field& v) const {
  const StencilField du = discrete_gradient(*domain_, u);
  const StencilField dv = discrete_gradient(*domain_, v);
  double sum = 0.0;
  for (int k = 0; k < du.semi_count(); ++k) {
    const auto a = du.at(k).reshaped();
    const auto b = dv.at(k).reshaped();
    const Mat* K = coefficient(k);
    sum += K ? a.dot(*K * b) : a.dot(b);
  }
  return domain_->cell_volume() * sum;
}

Field StencilForm::apply(const Field& u) const {
  const LatticeDomain& dom = *domain_;
  const StencilField du = discrete_gradient(dom, u);
  const int nr = dom.stencil().size();
  const int d = dom.dim();
  const double scale = dom.cell_volume() / dom.epsilon();
  Field w = zero_field(dom);
  Mat flux(d, nr);
  const auto& semi = dom.semi_interior();
  for (int k = 0; k < du.semi_count(); ++k) {
    const Mat* K = coefficient(k);
    if (K) {
      flux.reshaped() = *K * du.at(k).reshaped();
    } else {
      flux = du.at(k);
    }
    for (int r = 0; r < nr; ++r) {
      w.col(dom.forward_neighbour(k, r)) += scale * flux.col(r);
      w.col(semi[k]) -= scale * flux.col(r);
    }
  }
  return w;
}

Vec StencilForm::apply_interior(const Vec& packed) const {
  return pack_interior(*domain_, apply(unpack_interior(*domain_, packed)));
}

Eigen::SparseMatrix<double> StencilForm::assemble_interior() const {
  const LatticeDomain& dom = *domain_;
  const int nr = dom.stencil().size();
  const int d = dom.dim();
  const int n = d * static_cast<int>(dom.interior().size());
  const double scale = dom.cell_volume() / (dom.epsilon() * dom.epsilon());
  const auto& semi = dom.semi_interior();
  std::vector<Eigen::Triplet<double>> triplets;
  // Row i + d r of the local gradient reads (u_i(x + eps rho_r) - u_i(x)) / eps;
  // terms[r] lists the interior slots entering it with their signs.
  std::vector<std::vector<std::pair<int, double>>> terms(nr);
  for (int k = 0; k < static_cast<int>(semi.size()); ++k) {
    const int here = dom.interior_slot(semi[k]);
    for (int r = 0; r < nr; ++r) {
      terms[r].clear();
      if (here >= 0) terms[r].emplace_back(here, -1.0);
      const int there = dom.interior_slot(dom.forward_neighbour(k, r));
      if (there >= 0) terms[r].emplace_back(there, 1.0);
    }
    const Mat* K = coefficient(k);
    for (int r = 0; r < nr; ++r) {
      for (int q = 0; q < nr; ++q) {
        if (!K && q != r) continue;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            const double kv = K ? (*K)(i + d * r, j + d * q) : (i == j ? 1.0 : 0.0);
            if (kv == 0.0) continue;
            for (const auto& [a, sa] : terms[r]) {
              for (const auto& [b, sb] : terms[q]) {
                triplets.emplace_back(d * a + i, d * b + j, scale * kv * sa * sb);
              }
            }
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

double StencilForm::min_coefficient_eigenvalue() const {
  if (identity_) return 1.0;
  double m = std::numeric_limits<double>::infinity();
  for (const Mat& k : coefficients_) {
    m = std::min(m, Eigen::SelfAdjointEigenSolver<Mat>(k, Eigen::EigenvaluesOnly).eigenvalues()(0));
  }
  return m;
}

double StencilForm::max_coefficient_eigenvalue() const {
  if (identity_) return 1.0;
  double m = -std::numeric_limits<double>::infinity();
  for (const Mat& k : coefficients_) {
    const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(k, Eigen::EigenvaluesOnly).eigenvalues();
    m = std::max(m, ev(ev.size() - 1));
  }
  return m;
}

}  // namespace cbdyn
