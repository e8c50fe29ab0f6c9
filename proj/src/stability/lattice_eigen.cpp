#include "cbdyn/stability/lattice_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "cbdyn/errors.hpp"
#include "cbdyn/lattice/operators.hpp"

namespace cbdyn {

namespace {

LatticeEigenResult to_lattice(const LatticeDomain& domain, const LanczosResult& r, double vector_scale) {
  LatticeEigenResult out;
  out.value = r.value;
  out.vector = unpack_interior(domain, r.vector * vector_scale);
  out.steps = r.steps;
  out.inner_iterations = r.inner_iterations;
  out.residual = r.residual;
  return out;
}

int unknowns(const LatticeDomain& domain) {
  return domain.dim() * static_cast<int>(domain.interior().size());
}

using Sparse = Eigen::SparseMatrix<double>;

// Above this many unknowns the matrix-free Lanczos path is used.
constexpr int kAssemblyLimit = 100000;

// Smallest eigenpair of A u = lambda B u given a shift `lower` below the
// spectrum. A Cholesky factorisation of A - s B succeeds exactly when s lies
// below the smallest eigenvalue, so bisection on s gives a certified lower
// bound while inverse iteration at the best certified shift supplies Rayleigh
// quotients from above. Clustered spectra do not slow this down.
LanczosResult bracketed_eigenpair(const Sparse& A, const Sparse& B, double lower, const LanczosOptions& options) {
  const int n = static_cast<int>(A.rows());
  if (n <= 0) throw InvalidArgument("eigenproblem has no unknowns");
  Eigen::SimplicialLLT<Sparse> llt;
  llt.analyzePattern(Sparse(A - lower * B));
  LanczosResult result;
  auto factor = [&](double s) {
    llt.factorize(Sparse(A - s * B));
    ++result.steps;
    return llt.info() == Eigen::Success;
  };
  if (!factor(lower)) throw SolverStalled("initial shift is not below the spectrum");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = normal(rng);
  double best = std::numeric_limits<double>::infinity();
  Vec best_x;
  auto refine = [&](int iterations) {
    for (int it = 0; it < iterations; ++it) {
      x = llt.solve(B * x);
      x /= std::sqrt(x.dot(B * x));
      ++result.inner_iterations;
      const double q = x.dot(A * x);
      if (q < best) {
        best = q;
        best_x = x;
      }
    }
  };
  refine(4);

  double lo = lower;
  double upper = std::numeric_limits<double>::infinity();
  bool at_lo = true;
  constexpr int kMaxShifts = 400;
  for (int iter = 0;; ++iter) {
    const double tol = options.tolerance * std::max(1.0, std::abs(best));
    if (best - lo <= tol) break;
    if (iter >= kMaxShifts) {
      throw SolverStalled("eigenvalue bracket did not close (" + std::to_string(lo) + ", " +
                          std::to_string(best) + ")");
    }
    const double hi = std::min(best, upper);
    // Alternate a step just under the current estimate with plain bisection.
    const double s = iter % 2 == 0 ? hi - 0.5 * tol : 0.5 * (lo + hi);
    if (s <= lo) {
      // The bracket is tight but the estimate lags: iterate at lo.
      if (!at_lo && !factor(lo)) throw SolverStalled("lost a certified shift");
      at_lo = true;
      refine(3);
      continue;
    }
    at_lo = factor(s);
    if (at_lo) {
      lo = s;
      refine(3);
    } else {
      upper = s;
    }
  }
  result.value = best;
  result.vector = best_x;
  result.residual = (A * best_x - best * (B * best_x)).norm();
  return result;
}

double spectral_norm(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

LatticeEigenResult lambda_eps(const StencilForm& form, const LanczosOptions& options) {
  const LatticeDomain& domain = form.domain();
  const StencilForm gram = StencilForm::gram(domain);
  const double kmin = form.min_coefficient_eigenvalue();
  // Q >= kmin G, so any sigma < kmin keeps Q - sigma G positive definite.
  const double sigma = kmin - 0.1 * std::max(1.0, std::abs(kmin));
  if (unknowns(domain) <= kAssemblyLimit) {
    return to_lattice(domain, bracketed_eigenpair(form.assemble_interior(), gram.assemble_interior(), sigma, options),
                      1.0);
  }
  const LanczosResult r = smallest_generalized_eigenpair(
      [&](const Vec& v) { return form.apply_interior(v); },
      [&](const Vec& v) { return gram.apply_interior(v); }, unknowns(domain), sigma, options);
  return to_lattice(domain, r, 1.0);
}

LatticeEigenResult lambda_eps(const LatticeDomain& domain, const Mat& K, const LanczosOptions& options) {
  return lambda_eps(StencilForm::uniform(domain, K), options);
}

LatticeEigenResult garding_shifted_minimum(const StencilForm& form, double lambda1, const LanczosOptions& options) {
  const LatticeDomain& domain = form.domain();
  const StencilForm gram = StencilForm::gram(domain);
  const double mass = domain.cell_volume();
  const double half = 0.5 * lambda1;
  const double kappa = form.min_coefficient_eigenvalue() - half;
  // G <= (4|R| / eps^2) M with M = eps^d I, hence Q - half G >= shift M below.
  const double eps = domain.epsilon();
  const double sigma = kappa >= 0.0 ? -1.0 : kappa * 4.0 * domain.stencil().size() / (eps * eps) - 1.0;
  const int n = unknowns(domain);
  if (n <= kAssemblyLimit) {
    Sparse mass_matrix(n, n);
    mass_matrix.setIdentity();
    mass_matrix *= mass;
    const Sparse A = form.assemble_interior() - half * gram.assemble_interior();
    return to_lattice(domain, bracketed_eigenpair(A, mass_matrix, sigma, options), 1.0);
  }
  const LanczosResult r = smallest_generalized_eigenpair(
      [&](const Vec& v) -> Vec { return form.apply_interior(v) - half * gram.apply_interior(v); },
      [&](const Vec& v) -> Vec { return mass * v; }, unknowns(domain), sigma, options);
  return to_lattice(domain, r, 1.0);
}

GardingResult garding_verify(const LatticeDomain& domain, const std::vector<Mat>& coefficients, double lambda1,
                             double r, const GardingOptions& options) {
  if (!(lambda1 > 0.0)) throw InvalidArgument("lambda1 must be positive");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  const auto& semi = domain.semi_interior();
  if (coefficients.size() != semi.size()) {
    throw InvalidArgument("one coefficient tensor per semi-interior site is required");
  }
  GardingResult result;
  std::mt19937_64 rng(options.seed);

  // lambda_atom(A(x)) >= lambda1 on sampled sites.
  const int n_semi = static_cast<int>(semi.size());
  std::vector<int> slots;
  if (options.site_samples >= n_semi) {
    for (int s = 0; s < n_semi; ++s) slots.push_back(s);
  } else {
    std::uniform_int_distribution<int> pick(0, n_semi - 1);
    for (int i = 0; i < options.site_samples; ++i) slots.push_back(pick(rng));
  }
  result.min_sampled_lambda_atom = std::numeric_limits<double>::infinity();
  for (int s : slots) {
    const double la = lambda_atom_fourier(domain.stencil(), coefficients[s], options.fourier).value;
    result.min_sampled_lambda_atom = std::min(result.min_sampled_lambda_atom, la);
    if (la < lambda1) {
      std::ostringstream msg;
      msg << "lambda_atom(A(x)) = " << la << " < lambda1 = " << lambda1 << " at x = ("
          << domain.position(semi[s]).transpose() << ")";
      throw HypothesisViolated(msg.str());
    }
  }

  // Oscillation |A(x) - A(x')| <= lambda1/4 for close pairs.
  const double reach = 2.0 * r + 2.0 * domain.epsilon() * domain.stencil().r_max();
  const int d = domain.dim();
  const int span = static_cast<int>(std::floor(reach / domain.epsilon() + 1e-12));
  std::vector<IVec> offsets;
  {
    IVec o = IVec::Constant(d, -span);
    while (true) {
      if (o.cast<double>().norm() * domain.epsilon() <= reach * (1.0 + 1e-12) && o.squaredNorm() > 0) {
        offsets.push_back(o);
      }
      int a = d - 1;
      while (a >= 0 && o(a) == span) o(a--) = -span;
      if (a < 0) break;
      ++o(a);
    }
  }
  auto check_pair = [&](int s, const IVec& off) {
    const auto other = domain.find(domain.lattice_coords(semi[s]) + off);
    if (!other || !domain.is_semi_interior(*other)) return;
    const double osc = spectral_norm(coefficients[s] - coefficients[domain.semi_slot(*other)]);
    result.max_oscillation = std::max(result.max_oscillation, osc);
    if (osc > 0.25 * lambda1) {
      std::ostringstream msg;
      msg << "|A(x) - A(x')| = " << osc << " > lambda1/4 = " << 0.25 * lambda1 << " at x = ("
          << domain.position(semi[s]).transpose() << "), x' = (" << domain.position(*other).transpose() << ")";
      throw HypothesisViolated(msg.str());
    }
  };
  const long total_pairs = static_cast<long>(n_semi) * static_cast<long>(offsets.size());
  if (total_pairs <= options.pair_samples) {
    for (int s = 0; s < n_semi; ++s) {
      for (const IVec& off : offsets) check_pair(s, off);
    }
  } else if (!offsets.empty()) {
    std::uniform_int_distribution<int> pick_site(0, n_semi - 1);
    std::uniform_int_distribution<int> pick_offset(0, static_cast<int>(offsets.size()) - 1);
    for (long i = 0; i < options.pair_samples; ++i) {
      const int s = pick_site(rng);
      check_pair(s, offsets[pick_offset(rng)]);
    }
  }

  const StencilForm form = StencilForm::varying(domain, coefficients);
  result.eigen = garding_shifted_minimum(form, lambda1, options.eigen);
  result.mu = result.eigen.value;
  result.lambda2_star = r * r * std::max(0.0, -result.mu);
  return result;
}

}  // namespace cbdyn
