#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "m1sim/basis.hpp"

namespace m1sim {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Complex>;

// Compressed-row operator over a ConstrainedBasis. The basis must outlive
// the operator. Duplicate triplets are summed on assembly and exact zeros
// are pruned, so the stored nonzero pattern is canonical.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(const ConstrainedBasis& basis, SparseMatrix matrix, bool hermitian);

  static SparseOperator from_triplets(const ConstrainedBasis& basis,
                                      const std::vector<Triplet>& triplets,
                                      bool hermitian);

  const ConstrainedBasis& basis() const;
  const SparseMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t nnz() const { return static_cast<std::size_t>(matrix_.nonZeros()); }
  bool hermitian_flag() const { return hermitian_; }

  Complex coeff(std::size_t row, std::size_t col) const;
  double max_abs() const;
  bool is_numerically_hermitian(double tol = 1e-12) const;
  // True if every entry stays inside one fermion-number sector.
  bool is_sector_block_diagonal() const;

  Vector apply(const Vector& v) const;

  SparseOperator adjoint() const;
  SparseOperator scaled(Complex factor) const;
  SparseOperator with_hermitian_flag(bool hermitian) const;

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }
  Eigen::MatrixXcd dense_block(std::size_t begin, std::size_t end) const;

 private:
  void require_same_basis(const SparseOperator& other) const;

  const ConstrainedBasis* basis_ = nullptr;
  SparseMatrix matrix_;
  bool hermitian_ = false;
};

Vector apply(const SparseOperator& op, const Vector& v);

}  // namespace m1sim
