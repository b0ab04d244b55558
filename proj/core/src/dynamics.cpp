#include "m1sim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "m1sim/errors.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/parallel.hpp"

namespace m1sim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_evolvable(const SparseOperator& h, const Vector& psi0) {
  if (!h.hermitian_flag() && !h.is_numerically_hermitian())
    throw DomainError("evolution requires a hermitian operator");
  if (psi0.size() != static_cast<Eigen::Index>(h.dim()))
    throw DomainError("state dimension does not match the operator");
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw DomainError("evolution requires a normalized state");
}

PropagationMethod pick_method(const SparseOperator& h, const EvolveOptions& options) {
  if (options.method) return *options.method;
  return h.dim() <= options.dense_threshold ? PropagationMethod::spectral
                                            : PropagationMethod::krylov;
}

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  explicit SpectralDecomposition(const SparseOperator& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense());
    if (solver.info() != Eigen::Success)
      throw ConsistencyError("dense eigensolver failed to converge");
    eigenvalues = solver.eigenvalues();
    eigenvectors = solver.eigenvectors();
  }

  Vector propagate(const Vector& coeffs, double t) const {
    Vector phased(coeffs.size());
    for (Eigen::Index j = 0; j < coeffs.size(); ++j)
      phased[j] = coeffs[j] * std::polar(1.0, -eigenvalues[j] * t);
    return eigenvectors * phased;
  }
};

// One Krylov subspace at the current state; tau can be re-evaluated on the
// same subspace when a substep is rejected.
struct KrylovSpace {
  Eigen::MatrixXcd v;      // dim x m orthonormal Lanczos vectors
  Eigen::MatrixXd t;       // m x m tridiagonal projection
  double next_beta = 0.0;  // residual coupling out of the subspace
  int m = 0;

  KrylovSpace(const SparseOperator& h, const Vector& psi, int max_dim) {
    const auto dim = psi.size();
    const int cap = std::min<int>(max_dim, static_cast<int>(dim));
    v.resize(dim, cap);
    Eigen::VectorXd alpha(cap), beta(cap);
    v.col(0) = psi;
    double scale = 1.0;
    for (int j = 0; j < cap; ++j) {
      Vector w = h.apply(v.col(j));
      alpha(j) = v.col(j).dot(w).real();
      w -= alpha(j) * v.col(j);
      if (j > 0) w -= beta(j - 1) * v.col(j - 1);
      w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
      const double b = w.norm();
      scale = std::max({scale, std::abs(alpha(j)), b});
      m = j + 1;
      if (b <= 1e-14 * scale || j + 1 == cap) {
        next_beta = (b <= 1e-14 * scale) ? 0.0 : b;
        break;
      }
      beta(j) = b;
      v.col(j + 1) = w / b;
    }
    t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha(i);
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta(i);
  }
};

Vector krylov_evolve(const SparseOperator& h, const Vector& psi0, double t,
                     const EvolveOptions& options) {
  if (t == 0.0) return psi0;
  if (options.krylov_dimension < 2)
    throw DomainError("krylov_dimension must be at least 2");

  Vector psi = psi0;
  const double direction = (t > 0.0) ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double tau = remaining;
  std::size_t substeps = 0;
  double achieved = std::numeric_limits<double>::infinity();

  while (remaining > 0.0) {
    const KrylovSpace space(h, psi, options.krylov_dimension);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(space.t);
    const Eigen::VectorXd& theta = small.eigenvalues();
    const Eigen::MatrixXd& s = small.eigenvectors();

    tau = std::min(tau, remaining);
    while (true) {
      if (++substeps > options.max_substeps)
        throw ConvergenceError("Krylov propagation exceeded max_substeps", achieved);
      Eigen::VectorXcd phase(space.m);
      for (int j = 0; j < space.m; ++j)
        phase(j) = s(0, j) * std::polar(1.0, -direction * tau * theta(j));
      const Eigen::VectorXcd small_state = s * phase;  // exp(-i tau T) e1
      const double err = space.next_beta * std::abs(small_state(space.m - 1)) * tau;
      achieved = std::min(achieved, err);
      if (err <= options.krylov_step_tol || space.next_beta == 0.0) {
        psi = space.v.leftCols(space.m) * small_state;
        psi.normalize();
        remaining -= tau;
        if (err < 0.1 * options.krylov_step_tol) tau *= 2.0;
        break;
      }
      tau *= 0.5;
      if (tau < 1e-15 * std::abs(t))
        throw ConvergenceError("Krylov substep underflow before reaching tolerance",
                               achieved);
    }
  }
  return psi;
}

int dominant_sector(const ConstrainedBasis& basis, const Vector& psi, double& leak) {
  int best = 0;
  double best_weight = -1.0;
  for (int f = 0; f <= basis.max_fermions(); ++f) {
    const auto [b, e] = basis.sector_range(f);
    const double weight =
        psi.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b))
            .squaredNorm();
    if (weight > best_weight) {
      best_weight = weight;
      best = f;
    }
  }
  leak = 1.0 - best_weight;
  return best;
}

}  // namespace

Vector evolve(const SparseOperator& h, const Vector& psi0, double t,
              const EvolveOptions& options) {
  require_evolvable(h, psi0);
  if (t == 0.0) return psi0;
  if (pick_method(h, options) == PropagationMethod::spectral) {
    const SpectralDecomposition spectral(h);
    return spectral.propagate(spectral.eigenvectors.adjoint() * psi0, t);
  }
  return krylov_evolve(h, psi0, t, options);
}

QuenchResult fidelity_series(const SparseOperator& h, const Vector& psi0,
                             const std::vector<double>& times,
                             const std::vector<NamedObservable>& observables,
                             const EvolveOptions& options) {
  require_evolvable(h, psi0);
  if (times.empty() || times.front() != 0.0)
    throw DomainError("time grid must start at 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] < times[i]) throw DomainError("time grid must be ascending");
  for (const NamedObservable& obs : observables)
    if (!obs.op || obs.op->dim() != h.dim())
      throw DomainError("observable dimension does not match the evolution operator");

  QuenchResult result;
  result.times = times;
  result.fidelity.resize(times.size());
  for (const NamedObservable& obs : observables)
    result.observables[obs.name].resize(times.size());
  result.method = pick_method(h, options);

  if (result.method == PropagationMethod::spectral) {
    const SpectralDecomposition spectral(h);
    const Vector coeffs = spectral.eigenvectors.adjoint() * psi0;
    parallel_for_chunks(0, times.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        if (observables.empty()) {
          Complex overlap(0.0, 0.0);
          for (Eigen::Index j = 0; j < coeffs.size(); ++j)
            overlap += std::norm(coeffs[j]) *
                       std::polar(1.0, -spectral.eigenvalues[j] * times[i]);
          result.fidelity[i] = std::norm(overlap);
        } else {
          const Vector psi_t = spectral.propagate(coeffs, times[i]);
          result.fidelity[i] = std::norm(psi0.dot(psi_t));
          for (const NamedObservable& obs : observables)
            result.observables[obs.name][i] =
                psi_t.dot(obs.op->matrix() * psi_t).real();
        }
      }
    });
    return result;
  }

  Vector psi = psi0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) psi = krylov_evolve(h, psi, times[i] - times[i - 1], options);
    result.fidelity[i] = std::norm(psi0.dot(psi));
    for (const NamedObservable& obs : observables)
      result.observables[obs.name][i] = psi.dot(obs.op->apply(psi)).real();
  }
  return result;
}

std::vector<double> fermion_number_trace(const SparseOperator& h, const Vector& psi0,
                                         const std::vector<double>& times,
                                         const EvolveOptions& options) {
  const ConstrainedBasis& basis = h.basis();
  if (psi0.size() != static_cast<Eigen::Index>(basis.dim()))
    throw DomainError("state dimension does not match the operator");
  double leak = 0.0;
  const int f = dominant_sector(basis, psi0, leak);
  if (leak > 1e-12)
    throw DomainError("fermion_number_trace requires a sector-pure initial state");

  const SparseOperator number = build_fermion_number(basis);
  const QuenchResult result =
      fidelity_series(h, psi0, times, {{"fermion_number", &number}}, options);
  const std::vector<double>& series = result.observables.at("fermion_number");
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i] < f - 1 - 1e-9 || series[i] > f + 1 + 1e-9)
      throw ConsistencyError("fermion number left the supersymmetric window [f-1, f+1]");
  return series;
}

Vector z2_state(const ConstrainedBasis& basis) {
  const int n = basis.n_sites();
  if (n % 2 != 0) throw DomainError("Z2 product state requires an even ring");
  std::uint32_t bits = 0;
  for (int site = 2; site <= n; site += 2) bits |= 1u << (site - 1);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.index_of_bits(bits))] = 1.0;
  return v;
}

Vector single_site_state(const ConstrainedBasis& basis, int site) {
  if (site < 1 || site > basis.n_sites())
    throw DomainError("site out of range [1, n_sites]");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.index_of_bits(1u << (site - 1)))] = 1.0;
  return v;
}

std::vector<double> uniform_times(double t_max, std::size_t samples) {
  if (t_max < 0.0 || samples < 2)
    throw DomainError("time grid needs t_max >= 0 and at least 2 samples");
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i)
    times[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  return times;
}

double z2_fidelity_analytic(int n_sites, double t) {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw DomainError("Z2 fidelity requires an even ring with at least 4 sites");
  const double c = std::cos(std::sqrt(n_sites / 2.0) * t);
  return c * c;
}

double single_fermion_fidelity_exact(int n_sites, double t) {
  if (n_sites < kMinSites) throw DomainError("n_sites below the supported minimum");
  double sum = 0.0;
  for (int n = 0; n < n_sites; ++n) {
    const double k = 2.0 * kPi * n / n_sites;
    const double ek = n_sites - 2.0 + 2.0 * std::cos(k);
    sum += std::cos(std::sqrt(std::max(0.0, ek)) * t);
  }
  const double amplitude = sum / n_sites;
  return amplitude * amplitude;
}

double single_fermion_fidelity_bessel(int n_sites, double t) {
  if (n_sites < kMinSites) throw DomainError("n_sites below the supported minimum");
  const double root = std::sqrt(n_sites - 2.0);
  const double c = std::cos(root * t);
  const double j = bessel_j0(t / root);
  return c * c * j * j;
}

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= 12.0) {
    // Power series sum (-1)^m (x^2/4)^m / (m!)^2; largest term ~20 at x=12,
    // so cancellation stays benign.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 60; ++m) {
      term *= -q / (static_cast<double>(m) * m);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  // Hankel asymptotic expansion, truncated at the smallest term.
  const double omega = x - 0.25 * kPi;
  double p = 0.0, q = 0.0;
  double term = 1.0;  // A_k / x^k with A_k = prod_j (2j-1)^2 / (8j)
  for (int k = 0; k <= 40; ++k) {
    const int quadrant = k % 4;
    const double signed_term = (quadrant == 0 || quadrant == 1) ? term : -term;
    if (quadrant % 2 == 0)
      p += signed_term;
    else
      q += signed_term;
    const double ratio = static_cast<double>(2 * k + 1) * (2 * k + 1) /
                         (8.0 * (k + 1) * x);
    if (ratio >= 1.0 || term < 1e-18) break;
    term *= ratio;
  }
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(omega) + q * std::sin(omega));
}

}  // namespace m1sim
