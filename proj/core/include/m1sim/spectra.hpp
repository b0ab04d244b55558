#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "m1sim/sparse.hpp"

namespace m1sim {

struct DiagOptions {
  // Restrict to one fermion-number block (requires a block-diagonal operator).
  std::optional<int> sector;
  // Dense full solve at or below this dimension, Lanczos above it.
  std::size_t dense_threshold = 4096;
  // Extremal pairs requested on the iterative path. Single-vector Lanczos
  // resolves distinct eigenvalues only; degenerate multiplicities collapse.
  int iterative_pairs = 6;
  bool iterative_largest = false;
  int max_lanczos_iterations = 400;
  // Residual bound per eigenpair, relative to max(1, |eigenvalue|).
  double residual_tol = 1e-10;
};

struct Spectrum {
  // Entry i of each array describes one eigenpair. Sector-resolved spectra
  // are grouped by ascending fermion number and sorted ascending inside each
  // sector; otherwise sorted ascending overall with sector label -1.
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // columns over the full ConstrainedBasis
  std::vector<int> sector_labels;
  std::vector<double> residual_norms;
  bool complete = true;  // false when only extremal pairs were computed
  const ConstrainedBasis* basis = nullptr;

  std::size_t size() const { return eigenvalues.size(); }
};

Spectrum diagonalize(const SparseOperator& op, const DiagOptions& options = {});

struct Doublet {
  std::size_t lower_id;  // member in sector f
  std::size_t upper_id;  // partner in sector f + 1
  double energy;
};

struct SusyClassification {
  std::vector<std::size_t> singlet_ids;  // zero modes, annihilated both ways
  std::vector<Doublet> doublets;
  // Orthonormal eigenvectors actually used for the pairing; column k replaces
  // spectrum eigenpair k (degenerate subspaces are rotated so each column is
  // purely a kernel vector or purely an image vector of the supercharge).
  Eigen::MatrixXcd vectors;
};

// Splits a sector-resolved positive-semidefinite spectrum into zero modes and
// supersymmetric doublets. Degenerate subspaces are rotated via the Gram
// matrix of their supercharge images; partners are matched greedily by
// maximal overlap with re-orthogonalization.
SusyClassification classify_susy(const Spectrum& spectrum, const SparseOperator& q,
                                 double tol = 1e-9);

struct IntegerLine {
  long long value = 0;
  int multiplicity = 0;
  double max_distance = 0.0;  // worst |eigenvalue - value| in the group
};

// Per-sector census of eigenvalues within tol of an integer.
std::map<int, std::vector<IntegerLine>> integer_eigenvalue_table(const Spectrum& spectrum,
                                                                 double tol = 1e-8);

struct DoubletBlock {
  double energy = 0.0;      // supersymmetric energy E >= 0
  int fermion_number = 0;   // f of the upper member; the partner sits at f - 1
  double mu = 0.0;
};

struct DoubletHamiltonian {
  Eigen::Matrix2cd matrix;
  std::array<double, 2> eigenvalues;  // ascending
};

// Two-level block [[mu f, sqrt(E)], [sqrt(E), mu (f-1)]] and its eigenvalues
// mu (2f-1)/2 -+ sqrt(E + mu^2/4); the splitting is sqrt(4E + mu^2).
DoubletHamiltonian doublet_hamiltonian(const DoubletBlock& block);

struct Cut {
  int first_site = 1;  // 1-based; the region wraps around the ring if needed
  int size = 1;        // number of contiguous sites in part A
};

// Schmidt values (descending) of a normalized state across a contiguous ring
// bipartition, fermionic reordering signs included.
std::vector<double> schmidt_values(const Vector& v, const ConstrainedBasis& basis,
                                   const Cut& cut);

// Von Neumann entanglement entropy -sum p ln p over the squared Schmidt values.
double entanglement_entropy(const Vector& v, const ConstrainedBasis& basis,
                            const Cut& cut);

}  // namespace m1sim
