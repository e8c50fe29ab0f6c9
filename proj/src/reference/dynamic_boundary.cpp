#include "cbdyn/reference/dynamic_boundary.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/operators.hpp"
#include "cbdyn/lattice/quadratic_form.hpp"

namespace cbdyn {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

enum class NormKind { L2, H1 };

struct TimeTerm {
  NormKind kind;
  double weight;
  std::vector<std::pair<int, double>> coefficients;  // (node, coefficient)
};

std::vector<TimeTerm> time_terms(int nodes, double tau) {
  const int N = nodes - 1;
  std::vector<TimeTerm> terms;
  terms.push_back({NormKind::L2, 1.0, {{0, 1.0}}});
  terms.push_back({NormKind::H1, 1.0, {{0, 1.0}}});
  terms.push_back({NormKind::L2, 1.0, {{0, -1.5 / tau}, {1, 2.0 / tau}, {2, -0.5 / tau}}});
  Vec trap = Vec::Constant(nodes, tau);
  trap(0) = trap(N) = 0.5 * tau;
  for (int n = 0; n <= N; ++n) terms.push_back({NormKind::H1, trap(n), {{n, 1.0}}});
  for (int n = 0; n < N; ++n) terms.push_back({NormKind::H1, tau, {{n, -1.0 / tau}, {n + 1, 1.0 / tau}}});
  Vec w = trap.segment(1, N - 1);
  w(0) += trap(0);
  w(N - 2) += trap(N);
  const double t2 = 1.0 / (tau * tau);
  for (int m = 1; m < N; ++m) {
    terms.push_back({NormKind::L2, w(m - 1), {{m - 1, t2}, {m, -2.0 * t2}, {m + 1, t2}}});
  }
  return terms;
}

/// Residual rows of the functional: r = J_int x + J_bdry g, F = |r|^2.
struct Residual {
  Sparse interior;
  Sparse boundary;
};

Residual assemble(const LatticeDomain& domain, int nodes, double tau) {
  const auto& interior = domain.interior();
  const auto& semi = domain.semi_interior();
  const auto& bdry = domain.boundary_layer();
  const int ni = static_cast<int>(interior.size());
  const int nb = static_cast<int>(bdry.size());
  std::vector<int> bslot(domain.site_count(), -1);
  for (int b = 0; b < nb; ++b) bslot[bdry[b]] = b;

  const double eps = domain.epsilon();
  const double vol = domain.cell_volume();
  const int nr = domain.stencil().size();
  std::vector<Eigen::Triplet<double>> ti, tb;
  long row = 0;
  auto add = [&](int node, int site, double value) {
    if (domain.is_interior(site)) {
      ti.emplace_back(row, node * ni + domain.interior_slot(site), value);
    } else {
      tb.emplace_back(row, node * nb + bslot[site], value);
    }
  };
  for (const TimeTerm& term : time_terms(nodes, tau)) {
    const double s = std::sqrt(term.weight * vol);
    if (term.kind == NormKind::L2) {
      for (int site : interior) {
        for (const auto& [node, c] : term.coefficients) add(node, site, s * c);
        ++row;
      }
    } else {
      for (int k = 0; k < static_cast<int>(semi.size()); ++k) {
        for (int r = 0; r < nr; ++r) {
          const int fwd = domain.forward_neighbour(k, r);
          for (const auto& [node, c] : term.coefficients) {
            add(node, fwd, s * c / eps);
            add(node, semi[k], -s * c / eps);
          }
          ++row;
        }
      }
    }
  }
  Residual res;
  res.interior.resize(row, static_cast<long>(nodes) * ni);
  res.interior.setFromTriplets(ti.begin(), ti.end());
  res.boundary.resize(row, static_cast<long>(nodes) * nb);
  res.boundary.setFromTriplets(tb.begin(), tb.end());
  return res;
}

// Time coupling of the h1 and l2 parts: the normal matrix is A (x) H + B (x) L.
std::pair<Mat, Mat> time_matrices(int nodes, double tau) {
  Mat A = Mat::Zero(nodes, nodes), B = Mat::Zero(nodes, nodes);
  for (const TimeTerm& term : time_terms(nodes, tau)) {
    Mat& target = term.kind == NormKind::H1 ? A : B;
    for (const auto& [n, a] : term.coefficients) {
      for (const auto& [m, b] : term.coefficients) target(n, m) += term.weight * a * b;
    }
  }
  return {A, B};
}

// One scalar component of the interior h1 Gram matrix.
Sparse scalar_gram(const LatticeDomain& domain) {
  const Sparse full = StencilForm::gram(domain).assemble_interior();
  const int d = domain.dim();
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < full.outerSize(); ++k) {
    for (Sparse::InnerIterator it(full, k); it; ++it) {
      if (it.row() % d == 0 && it.col() % d == 0) t.emplace_back(it.row() / d, it.col() / d, it.value());
    }
  }
  Sparse out(full.rows() / d, full.cols() / d);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

Vec dyn_time_grid(double T0, double step) {
  if (!(T0 > 0.0) || !(step > 0.0)) throw InvalidArgument("T0 and the time step must be positive");
  const int N = std::max(2, static_cast<int>(std::ceil(T0 / step - 1e-9)));
  return Vec::LinSpaced(N + 1, 0.0, T0);
}

double dyn_functional(const LatticeDomain& domain, const std::vector<Field>& z, double tau) {
  const int nodes = static_cast<int>(z.size());
  if (nodes < 3) throw InvalidArgument("at least 3 time nodes are required");
  double total = 0.0;
  for (const TimeTerm& term : time_terms(nodes, tau)) {
    Field combo = Field::Zero(z[0].rows(), z[0].cols());
    for (const auto& [node, c] : term.coefficients) combo += c * z[node];
    const double n = term.kind == NormKind::L2 ? norm_l2(domain, combo) : norm_h1(domain, combo);
    total += term.weight * n * n;
  }
  return total;
}

struct DynamicBoundaryNorm::Impl {
  Residual residual;
  // With B = C C^T and C^{-1} A C^{-T} = U diag(mu) U^T, V = C^{-T} U turns
  // A (x) H + B (x) L into diag(mu) (x) H + I (x) L, one spatial solve per
  // node. The coupled factorisation is the fallback.
  Mat V;
  std::vector<std::unique_ptr<Eigen::SimplicialLLT<Sparse>>> blocks;
  Eigen::SimplicialLDLT<Sparse> coupled;
  bool split = false;
};

DynamicBoundaryNorm::DynamicBoundaryNorm(const LatticeDomain& domain, double T0, double step)
    : domain_(&domain), times_(dyn_time_grid(T0, step)), impl_(std::make_unique<Impl>()) {
  tau_ = times_(1) - times_(0);
  const int nodes = static_cast<int>(times_.size());
  impl_->residual = assemble(domain, nodes, tau_);

  const auto [A, B] = time_matrices(nodes, tau_);
  const Eigen::LLT<Mat> chol(B);
  if (chol.info() == Eigen::Success) {
    const Mat half = chol.matrixL().solve(A);
    const Mat pencil = chol.matrixL().solve(Mat(half.transpose()));
    const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pencil + pencil.transpose()));
    impl_->V = chol.matrixU().solve(es.eigenvectors());
    const Sparse H = scalar_gram(domain);
    Sparse L(H.rows(), H.cols());
    L.setIdentity();
    L *= domain.cell_volume();
    impl_->split = true;
    for (int k = 0; k < nodes; ++k) {
      impl_->blocks.push_back(std::make_unique<Eigen::SimplicialLLT<Sparse>>(
          Sparse(std::max(0.0, es.eigenvalues()(k)) * H + L)));
      if (impl_->blocks.back()->info() != Eigen::Success) impl_->split = false;
    }
  }
  if (!impl_->split) {
    impl_->blocks.clear();
    const Sparse normal = Sparse(impl_->residual.interior.transpose()) * impl_->residual.interior;
    impl_->coupled.compute(normal);
    if (impl_->coupled.info() != Eigen::Success) {
      throw SolverDiverged("factorisation of the dynamic boundary normal equations failed", 0.0);
    }
  }
}

DynamicBoundaryNorm::~DynamicBoundaryNorm() = default;
DynamicBoundaryNorm::DynamicBoundaryNorm(DynamicBoundaryNorm&&) noexcept = default;

DynamicBoundaryResult DynamicBoundaryNorm::evaluate(const std::vector<Field>& g) const {
  const LatticeDomain& domain = *domain_;
  const int nodes = static_cast<int>(times_.size());
  if (static_cast<int>(g.size()) != nodes) throw InvalidArgument("boundary signal must have one field per time node");
  const auto& interior = domain.interior();
  const auto& bdry = domain.boundary_layer();
  const int ni = static_cast<int>(interior.size());
  const int nb = static_cast<int>(bdry.size());
  const int d = domain.dim();

  DynamicBoundaryResult result;
  result.times = times_;
  result.extension.assign(nodes, Field::Zero(d, domain.site_count()));
  double total = 0.0;
  for (int comp = 0; comp < d; ++comp) {
    Vec gv(static_cast<long>(nodes) * nb);
    for (int n = 0; n < nodes; ++n) {
      if (g[n].rows() != d || g[n].cols() != domain.site_count()) {
        throw InvalidArgument("boundary field has the wrong shape");
      }
      for (int b = 0; b < nb; ++b) gv(n * nb + b) = g[n](comp, bdry[b]);
    }
    const Vec c = impl_->residual.boundary * gv;
    const Vec rhs = -(impl_->residual.interior.transpose() * c);
    Vec x(rhs.size());
    if (impl_->split) {
      // Columns are time nodes: x = (V (x) I) y and (V^T (x) I) rhs = R V.
      const Mat R = Eigen::Map<const Mat>(rhs.data(), ni, nodes) * impl_->V;
      Mat Y(ni, nodes);
      for (int k = 0; k < nodes; ++k) Y.col(k) = impl_->blocks[k]->solve(R.col(k));
      Eigen::Map<Mat>(x.data(), ni, nodes) = Y * impl_->V.transpose();
    } else {
      x = impl_->coupled.solve(rhs);
    }
    if (!x.allFinite()) {
      throw SolverDiverged("dynamic boundary solve failed", (rhs).norm());
    }
    const Vec r = impl_->residual.interior * x + c;
    total += r.squaredNorm();
    for (int n = 0; n < nodes; ++n) {
      for (int k = 0; k < ni; ++k) result.extension[n](comp, interior[k]) = x(n * ni + k);
      for (int b = 0; b < nb; ++b) result.extension[n](comp, bdry[b]) = gv(n * nb + b);
    }
  }
  result.norm = std::sqrt(total);
  return result;
}

DynamicBoundaryResult dyn_boundary_norm(const LatticeDomain& domain, const std::vector<Field>& g, double T0) {
  return DynamicBoundaryNorm(domain, T0, domain.epsilon()).evaluate(g);
}

}  // namespace cbdyn
