#include "m1sim/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "m1sim/errors.hpp"
#include "m1sim/parallel.hpp"

namespace m1sim {

namespace {

void drop_zeros(SparseMatrix& m) {
  m.prune([](const Eigen::Index&, const Eigen::Index&, const Complex& v) {
    return v != Complex(0.0, 0.0);
  });
  m.makeCompressed();
}

}  // namespace

SparseOperator::SparseOperator(const ConstrainedBasis& basis, SparseMatrix matrix,
                               bool hermitian)
    : basis_(&basis), matrix_(std::move(matrix)), hermitian_(hermitian) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw DomainError("operator dimension does not match basis dimension");
  drop_zeros(matrix_);
}

SparseOperator SparseOperator::from_triplets(const ConstrainedBasis& basis,
                                             const std::vector<Triplet>& triplets,
                                             bool hermitian) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(basis, std::move(m), hermitian);
}

const ConstrainedBasis& SparseOperator::basis() const {
  if (!basis_) throw ConsistencyError("operator has no attached basis");
  return *basis_;
}

Complex SparseOperator::coeff(std::size_t row, std::size_t col) const {
  if (row >= dim() || col >= dim()) throw DomainError("coefficient index out of range");
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

double SparseOperator::max_abs() const {
  double best = 0.0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it)
      best = std::max(best, std::abs(it.value()));
  return best;
}

bool SparseOperator::is_numerically_hermitian(double tol) const {
  SparseMatrix diff = SparseMatrix(matrix_.adjoint()) - matrix_;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(diff, r); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst <= tol * std::max(1.0, max_abs());
}

bool SparseOperator::is_sector_block_diagonal() const {
  const ConstrainedBasis& b = basis();
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    const int fr = b.sector_of_index(static_cast<std::size_t>(r));
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it)
      if (b.sector_of_index(static_cast<std::size_t>(it.col())) != fr) return false;
  }
  return true;
}

Vector SparseOperator::apply(const Vector& v) const {
  if (v.size() != matrix_.rows())
    throw DomainError("vector dimension does not match operator");
  Vector out(v.size());
  const auto rows = static_cast<std::size_t>(matrix_.rows());
  // Row-parallel product; rows are independent so the split cannot change
  // the result.
  parallel_for_chunks(0, rows, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      Complex acc(0.0, 0.0);
      for (SparseMatrix::InnerIterator it(matrix_, static_cast<Eigen::Index>(r)); it; ++it)
        acc += it.value() * v[it.col()];
      out[static_cast<Eigen::Index>(r)] = acc;
    }
  });
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out(basis(), SparseMatrix(matrix_.adjoint()), hermitian_);
  return out;
}

SparseOperator SparseOperator::scaled(Complex factor) const {
  return SparseOperator(basis(), SparseMatrix(matrix_ * factor),
                        hermitian_ && factor.imag() == 0.0);
}

SparseOperator SparseOperator::with_hermitian_flag(bool hermitian) const {
  return SparseOperator(basis(), matrix_, hermitian);
}

void SparseOperator::require_same_basis(const SparseOperator& other) const {
  if (basis_ != other.basis_)
    throw DomainError("operators are defined over different bases");
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  a.require_same_basis(b);
  return SparseOperator(a.basis(), SparseMatrix(a.matrix_ + b.matrix_),
                        a.hermitian_ && b.hermitian_);
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  a.require_same_basis(b);
  return SparseOperator(a.basis(), SparseMatrix(a.matrix_ - b.matrix_),
                        a.hermitian_ && b.hermitian_);
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  a.require_same_basis(b);
  return SparseOperator(a.basis(), SparseMatrix(a.matrix_ * b.matrix_), false);
}

Eigen::MatrixXcd SparseOperator::dense_block(std::size_t begin, std::size_t end) const {
  if (begin > end || end > dim()) throw DomainError("block range out of bounds");
  const auto b = static_cast<Eigen::Index>(begin);
  const auto n = static_cast<Eigen::Index>(end - begin);
  return Eigen::MatrixXcd(matrix_.block(b, b, n, n));
}

Vector apply(const SparseOperator& op, const Vector& v) { return op.apply(v); }

}  // namespace m1sim
