#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "m1sim/basis.hpp"
#include "m1sim/dynamics.hpp"
#include "m1sim/errors.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

using namespace m1sim;

namespace {

constexpr double kPi = std::numbers::pi;

Vector random_sector_state(const ConstrainedBasis& basis, int f, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  const auto [b, e] = basis.sector_range(f);
  for (std::size_t i = b; i < e; ++i)
    v[static_cast<Eigen::Index>(i)] = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("bessel j0 matches the library Bessel to 1e-10 on [0, 100]") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
  double worst = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double x = 100.0 * i / 5000.0;
    worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("closed-form Z2 fidelity hits its zeros and revivals") {
  CHECK(z2_fidelity_analytic(12, 0.0) == 1.0);
  CHECK(std::abs(z2_fidelity_analytic(12, kPi / (2.0 * std::sqrt(6.0)))) <= 1e-12);
  CHECK(z2_fidelity_analytic(30, kPi / std::sqrt(15.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(z2_fidelity_analytic(9, 1.0), DomainError);
  CHECK_THROWS_AS(z2_fidelity_analytic(2, 1.0), DomainError);
}

TEST_CASE("exact single-fermion fidelity equals the full evolution at n = 12") {
  const ConstrainedBasis basis(12);
  const SparseOperator h = build_pxp(basis, {0.0});
  const Vector psi0 = single_site_state(basis, 1);
  const std::vector<double> times = uniform_times(8.0, 161);
  const QuenchResult quench = fidelity_series(h, psi0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(quench.fidelity[i] - single_fermion_fidelity_exact(12, times[i])) <=
          1e-8);
}

TEST_CASE("fidelity of a single fermion does not depend on its site") {
  const ConstrainedBasis basis(8);
  const SparseOperator h = build_pxp(basis, {0.0});
  const std::vector<double> times = uniform_times(6.0, 61);
  const QuenchResult a = fidelity_series(h, single_site_state(basis, 1), times);
  const QuenchResult b = fidelity_series(h, single_site_state(basis, 5), times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(a.fidelity[i] == doctest::Approx(b.fidelity[i]).epsilon(1e-9));
}

TEST_CASE("bessel approximation tracks the exact fidelity at n = 30") {
  CHECK(single_fermion_fidelity_bessel(30, 0.0) == doctest::Approx(1.0));
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 20.0 * i / 4000.0;
    worst = std::max(worst, std::abs(single_fermion_fidelity_exact(30, t) -
                                     single_fermion_fidelity_bessel(30, t)));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("first revival at n = 30 sits within 2 percent of pi / sqrt(28)") {
  double best_t = 0.0, best_f = -1.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = 0.3 + 0.7 * i / 20000.0;
    const double f = single_fermion_fidelity_exact(30, t);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  }
  const double expected = kPi / std::sqrt(28.0);
  CHECK(std::abs(best_t - expected) / expected < 0.02);
  CHECK(best_f > 0.9);
}

TEST_CASE("late-time envelope peaks of the bessel form decay as c / t") {
  const double root = std::sqrt(28.0);
  const double window = kPi * root;
  std::vector<double> pts, pfs;
  for (double a = 20.0 * root; a + window <= 40.0 * root + 1e-9; a += window) {
    double best_f = -1.0, best_t = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = a + window * i / 4000.0;
      const double f = single_fermion_fidelity_bessel(30, t);
      if (f > best_f) {
        best_f = f;
        best_t = t;
      }
    }
    pts.push_back(best_t);
    pfs.push_back(best_f);
  }
  REQUIRE(pts.size() >= 5);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    num += pfs[i] / pts[i];
    den += 1.0 / (pts[i] * pts[i]);
  }
  const double c = num / den;
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(c / pts[i] - pfs[i]) / pfs[i] < 0.10);
}

TEST_CASE("evolve is the identity at t = 0 and a phase on eigenvectors") {
  const ConstrainedBasis basis(8);
  const SparseOperator h = build_m1(basis);
  const Vector psi0 = random_sector_state(basis, 2, 11);
  CHECK((evolve(h, psi0, 0.0) - psi0).norm() == 0.0);

  const Spectrum spectrum = diagonalize(h);
  const std::size_t pick = spectrum.size() / 2;
  const Vector v = spectrum.eigenvectors.col(static_cast<Eigen::Index>(pick));
  const double e = spectrum.eigenvalues[pick];
  const double t = 1.37;
  const Vector expected = std::polar(1.0, -e * t) * v;
  CHECK((evolve(h, v, t) - expected).norm() <= 1e-10);
}

TEST_CASE("Z2 state revives perfectly at t = pi / sqrt(6) for n = 12") {
  const ConstrainedBasis basis(12);
  const SparseOperator h = build_pxp(basis, {0.0});
  const Vector z2 = z2_state(basis);
  const Vector evolved = evolve(h, z2, kPi / std::sqrt(6.0));
  CHECK(std::norm(z2.dot(evolved)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Z2 fidelity series equals cos^2(sqrt(6) t) at mu = 0") {
  const ConstrainedBasis basis(12);
  const SparseOperator h = build_pxp(basis, {0.0});
  const Vector z2 = z2_state(basis);
  const std::vector<double> times = uniform_times(5.0, 201);
  const QuenchResult quench = fidelity_series(h, z2, times);
  CHECK(std::abs(quench.fidelity[0] - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(quench.fidelity[i] >= -1e-12);
    CHECK(quench.fidelity[i] <= 1.0 + 1e-12);
    CHECK(std::abs(quench.fidelity[i] - z2_fidelity_analytic(12, times[i])) <= 1e-8);
  }
}

TEST_CASE("Z2 Rabi oscillation at mu = 1 has frequency 5 and contrast 24/25") {
  const ConstrainedBasis basis(12);
  const SparseOperator h = build_pxp(basis, {1.0});
  const Vector z2 = z2_state(basis);
  // Two-level block [[6, sqrt(6)], [sqrt(6), 5]]: splitting sqrt(2N + mu^2) = 5,
  // so F(t) = 1 - (24/25) sin^2(5t/2).
  for (double t : {0.31, 0.9, 1.7, 2.0 * kPi / 5.0, kPi / 5.0}) {
    const Vector evolved = evolve(h, z2, t);
    const double expected = 1.0 - (24.0 / 25.0) * std::pow(std::sin(2.5 * t), 2);
    CHECK(std::norm(z2.dot(evolved)) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("fermion number stays within [f-1, f+1] and is flat on eigenstates") {
  const ConstrainedBasis basis(12);
  const SparseOperator h = build_pxp(basis, {0.0});
  const std::vector<double> times = uniform_times(7.0, 71);

  const std::vector<double> z2_trace = fermion_number_trace(h, z2_state(basis), times);
  CHECK(z2_trace[0] == doctest::Approx(6.0).epsilon(1e-12));
  for (double v : z2_trace) {
    CHECK(v >= 5.0 - 1e-9);
    CHECK(v <= 7.0 + 1e-9);
  }

  Vector vacuum = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  vacuum[0] = 1.0;
  for (double v : fermion_number_trace(h, vacuum, times)) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }

  // A supersymmetric singlet is annihilated by Q and Q^dagger, so it is a
  // sector-pure eigenstate of the deformed Hamiltonian for any mu.
  const Spectrum supersymmetric = diagonalize(build_m1(basis));
  std::size_t zero_id = supersymmetric.size();
  for (std::size_t i = 0; i < supersymmetric.size(); ++i)
    if (supersymmetric.eigenvalues[i] <= 1e-10) zero_id = i;
  REQUIRE(zero_id < supersymmetric.size());
  REQUIRE(supersymmetric.sector_labels[zero_id] == 4);
  const Vector singlet =
      supersymmetric.eigenvectors.col(static_cast<Eigen::Index>(zero_id));
  const SparseOperator deformed = build_pxp(basis, {0.5});
  const std::vector<double> flat = fermion_number_trace(deformed, singlet, times);
  for (double v : flat) {
    CHECK(std::abs(v - 4.0) <= 1e-10);
  }

  Vector mixed = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  mixed[0] = 1.0 / std::sqrt(2.0);
  mixed[static_cast<Eigen::Index>(basis.sector_range(2).first)] = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(fermion_number_trace(h, mixed, times), DomainError);
}

TEST_CASE("evolution preserves norm, composes, and conserves energy") {
  const ConstrainedBasis basis(10);
  const SparseOperator h = build_pxp(basis, {0.7});
  const Vector psi0 = random_sector_state(basis, 2, 23);

  const Vector a = evolve(h, psi0, 3.7);
  CHECK(std::abs(a.norm() - 1.0) <= 1e-9);

  const Vector b = evolve(h, evolve(h, psi0, 1.3), 2.4);
  CHECK((a - b).norm() <= 1e-8);

  const double e0 = psi0.dot(h.apply(psi0)).real();
  const double e1 = a.dot(h.apply(a)).real();
  CHECK(std::abs(e1 - e0) <= 1e-9);
}

TEST_CASE("krylov propagation agrees with the spectral method") {
  const ConstrainedBasis basis(10);
  const SparseOperator h = build_pxp(basis, {0.3});
  const Vector psi0 = z2_state(basis);

  EvolveOptions krylov;
  krylov.method = PropagationMethod::krylov;
  for (double t : {0.9, 4.2, -2.5}) {
    const Vector direct = evolve(h, psi0, t);
    const Vector iterated = evolve(h, psi0, t, krylov);
    CHECK((direct - iterated).norm() <= 1e-8);
  }

  const std::vector<double> times = uniform_times(4.0, 41);
  const QuenchResult spectral = fidelity_series(h, psi0, times);
  const QuenchResult stepped = fidelity_series(h, psi0, times, {}, krylov);
  CHECK(spectral.method == PropagationMethod::spectral);
  CHECK(stepped.method == PropagationMethod::krylov);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(spectral.fidelity[i] - stepped.fidelity[i]) <= 1e-8);
}

TEST_CASE("krylov failure reports the achieved error bound") {
  const ConstrainedBasis basis(10);
  const SparseOperator h = build_pxp(basis, {0.0});
  EvolveOptions cramped;
  cramped.method = PropagationMethod::krylov;
  cramped.krylov_dimension = 3;
  cramped.krylov_step_tol = 1e-12;
  cramped.max_substeps = 4;
  try {
    evolve(h, random_sector_state(basis, 2, 7), 10.0, cramped);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& err) {
    CHECK(err.achieved_bound > 0.0);
  }
}

TEST_CASE("evolution inputs are validated") {
  const ConstrainedBasis basis(6);
  const SparseOperator q = build_supercharge(basis);
  const SparseOperator h = build_pxp(basis, {0.0});
  Vector psi0 = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  psi0[0] = 1.0;
  CHECK_THROWS_AS(evolve(q, psi0, 1.0), DomainError);
  CHECK_THROWS_AS(evolve(h, 2.0 * psi0, 1.0), DomainError);
  CHECK_THROWS_AS(fidelity_series(h, psi0, {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(fidelity_series(h, psi0, {0.0, 2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(single_site_state(basis, 7), DomainError);
  CHECK_THROWS_AS(z2_state(ConstrainedBasis(7)), DomainError);
  CHECK_THROWS_AS(uniform_times(-1.0, 10), DomainError);
  CHECK_THROWS_AS(uniform_times(1.0, 1), DomainError);

  const std::vector<double> grid = uniform_times(3.0, 4);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(3.0));
  CHECK(grid[1] == doctest::Approx(1.0));
}
