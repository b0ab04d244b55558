#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include <Eigen/Eigenvalues>

#include "m1sim/basis.hpp"
#include "m1sim/errors.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/sparse.hpp"

using namespace m1sim;

namespace {

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
  return (a - b).max_abs();
}

Vector basis_vector(const ConstrainedBasis& basis, std::uint32_t bits) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.index_of_bits(bits))] = 1.0;
  return v;
}

std::uint32_t z2_bits(int n) {
  std::uint32_t bits = 0;
  for (int site = 2; site <= n; site += 2) bits |= 1u << (site - 1);
  return bits;
}

}  // namespace

TEST_CASE("fermion number is diagonal with trace 8 on the n = 4 basis") {
  const ConstrainedBasis basis(4);
  const SparseOperator f = build_fermion_number(basis);
  Complex trace(0.0, 0.0);
  for (std::size_t i = 0; i < basis.dim(); ++i) trace += f.coeff(i, i);
  // One vacuum, four one-fermion states, two two-fermion states.
  CHECK(trace.real() == doctest::Approx(8.0));
  CHECK(trace.imag() == 0.0);
  CHECK(f.nnz() == basis.dim() - 1);  // vacuum entry is an exact zero
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const double want = fermion_count(basis.state_bits(i));
    CHECK(f.coeff(i, i).real() == doctest::Approx(want));
  }
}

TEST_CASE("supercharge annihilates the vacuum and lowers one fermion") {
  const ConstrainedBasis basis(4);
  const SparseOperator q = build_supercharge(basis);
  const Vector vac = basis_vector(basis, 0u);
  CHECK(q.apply(vac).norm() == 0.0);

  // Q|0100> has a single amplitude of modulus 1 on the vacuum.
  const Vector one = basis_vector(basis, 0b0010u);
  const Vector lowered = q.apply(one);
  CHECK(std::abs(lowered[0]) == doctest::Approx(1.0));
  CHECK((lowered.norm()) == doctest::Approx(1.0));
  // Convention pin: no occupied site below site 2, so the sign is +1.
  CHECK(lowered[0].real() == doctest::Approx(1.0));
}

TEST_CASE("supercharge is nilpotent") {
  for (int n : {3, 4, 6, 9, 12}) {
    const ConstrainedBasis basis(n);
    const SparseOperator q = build_supercharge(basis);
    CHECK((q * q).max_abs() <= 1e-14);
    CHECK((q.adjoint() * q.adjoint()).max_abs() <= 1e-14);
  }
}

TEST_CASE("fermion number generates the expected commutators") {
  for (int n : {4, 8, 12}) {
    const ConstrainedBasis basis(n);
    const SparseOperator q = build_supercharge(basis);
    const SparseOperator f = build_fermion_number(basis);
    const SparseOperator h = build_m1(basis);
    CHECK(max_abs_diff(f * q - q * f, q.scaled(-1.0)) <= 1e-13);
    const SparseOperator qd = q.adjoint();
    CHECK(max_abs_diff(f * qd - qd * f, qd) <= 1e-13);
    CHECK((f * h - h * f).max_abs() <= 1e-13);
  }
}

TEST_CASE("alternating state has energy expectation n/2") {
  const ConstrainedBasis basis(12);
  const SparseOperator q = build_supercharge(basis);
  const Vector z2 = basis_vector(basis, z2_bits(12));
  const Vector qz2 = q.apply(z2);
  CHECK(qz2.squaredNorm() == doctest::Approx(6.0));
  const SparseOperator h = build_m1(basis);
  const Complex e = z2.dot(h.apply(z2));
  CHECK(e.real() == doctest::Approx(6.0));
}

TEST_CASE("algebraic and literal Hamiltonians agree entry by entry") {
  for (int n : {3, 4, 5, 6, 8, 10, 12}) {
    const ConstrainedBasis basis(n);
    const SparseOperator algebraic = build_m1(basis);
    const SparseOperator literal = build_m1_literal(basis);
    const double diff = max_abs_diff(algebraic, literal);
    INFO("n = ", n, ", max entry difference = ", diff);
    // Same Jordan-Wigner convention on both constructions: the ring-wrap
    // hopping entries carry the identical (-1)^(f-1) string, so the two
    // matrices coincide rather than differing by a boundary sign.
    CHECK(diff <= 1e-13);
  }
}

TEST_CASE("literal form diagonal entries") {
  const ConstrainedBasis basis(12);
  const SparseOperator literal = build_m1_literal(basis);
  const std::size_t vac = basis.index_of_bits(0u);
  CHECK(literal.coeff(vac, vac).real() == doctest::Approx(12.0));
  const std::size_t z2 = basis.index_of_bits(z2_bits(12));
  CHECK(literal.coeff(z2, z2).real() == doctest::Approx(6.0));
}

TEST_CASE("single-fermion block is an open tight-binding ring plus constant") {
  const int n = 10;
  const ConstrainedBasis basis(n);
  const SparseOperator h = build_m1(basis);
  auto [b, e] = basis.sector_range(1);
  REQUIRE(e - b == static_cast<std::size_t>(n));
  const Eigen::MatrixXcd block = h.dense_block(b, e);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int site_r = 1 + static_cast<int>(std::countr_zero(basis.state_bits(b + r)));
      const int site_c = 1 + static_cast<int>(std::countr_zero(basis.state_bits(b + c)));
      const int dist = std::min((site_r - site_c + n) % n, (site_c - site_r + n) % n);
      const Complex v = block(r, c);
      if (dist == 0) {
        CHECK(v.real() == doctest::Approx(n - 2.0));
      } else if (dist == 1) {
        CHECK(v.real() == doctest::Approx(1.0));
      } else {
        CHECK(std::abs(v) == 0.0);
      }
    }
  }
}

TEST_CASE("deformed Hamiltonian decomposes as Q + Qdag + mu F") {
  const ConstrainedBasis basis(10);
  const SparseOperator q = build_supercharge(basis);
  const SparseOperator f = build_fermion_number(basis);
  for (double mu : {0.0, 0.7, -1.3}) {
    const SparseOperator h = build_pxp(basis, ModelParams{mu});
    const SparseOperator want = q + q.adjoint() + f.scaled(mu);
    CHECK(max_abs_diff(h, want) <= 1e-14);
    CHECK(h.hermitian_flag());
    CHECK(h.is_numerically_hermitian());
  }
}

TEST_CASE("sector coupling structure") {
  const ConstrainedBasis basis(10);
  CHECK(build_m1(basis).is_sector_block_diagonal());
  CHECK(build_fermion_number(basis).is_sector_block_diagonal());
  const SparseOperator q = build_supercharge(basis);
  CHECK(!q.is_sector_block_diagonal());
  // Every supercharge entry lowers the fermion number by exactly one.
  const auto& m = q.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      const int fr = basis.sector_of_index(static_cast<std::size_t>(it.row()));
      const int fc = basis.sector_of_index(static_cast<std::size_t>(it.col()));
      CHECK(fc - fr == 1);
    }
  // The deformed model only couples adjacent sectors.
  const SparseOperator h = build_pxp(basis, ModelParams{0.9});
  const auto& hm = h.matrix();
  for (Eigen::Index r = 0; r < hm.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(hm, r); it; ++it) {
      const int fr = basis.sector_of_index(static_cast<std::size_t>(it.row()));
      const int fc = basis.sector_of_index(static_cast<std::size_t>(it.col()));
      CHECK(std::abs(fr - fc) <= 1);
    }
}

TEST_CASE("supersymmetric Hamiltonian is positive semi-definite") {
  for (int n : {3, 4, 5, 6, 7, 8, 9, 10}) {
    const ConstrainedBasis basis(n);
    const SparseOperator h = build_m1(basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense(),
                                                           Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("apply validates dimensions and respects linearity") {
  const ConstrainedBasis basis(8);
  const SparseOperator h = build_m1(basis);
  Vector bad(3);
  bad.setZero();
  CHECK_THROWS_AS(h.apply(bad), DomainError);

  std::mt19937 rng(21);
  std::normal_distribution<double> gauss;
  Vector x(static_cast<Eigen::Index>(basis.dim())), y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = Complex(gauss(rng), gauss(rng));
    y[i] = Complex(gauss(rng), gauss(rng));
  }
  const Complex alpha(0.3, -1.1);
  const Vector lhs = h.apply(alpha * x + y);
  const Vector rhs = alpha * h.apply(x) + h.apply(y);
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("operators over different bases cannot be combined") {
  const ConstrainedBasis a(6), b(7);
  const SparseOperator qa = build_supercharge(a);
  const SparseOperator qb = build_supercharge(b);
  CHECK_THROWS_AS(qa + qb, DomainError);
  CHECK_THROWS_AS(qa * qb, DomainError);
}

TEST_CASE("assembly does not depend on the worker count") {
  const char* saved = std::getenv("M1SIM_THREADS");
  const std::string restore = saved ? saved : "";

  setenv("M1SIM_THREADS", "1", 1);
  const ConstrainedBasis basis(11);
  const SparseOperator serial = build_m1_literal(basis);
  setenv("M1SIM_THREADS", "5", 1);
  const SparseOperator threaded = build_m1_literal(basis);

  if (saved)
    setenv("M1SIM_THREADS", restore.c_str(), 1);
  else
    unsetenv("M1SIM_THREADS");

  REQUIRE(serial.nnz() == threaded.nnz());
  CHECK(max_abs_diff(serial, threaded) == 0.0);
}
