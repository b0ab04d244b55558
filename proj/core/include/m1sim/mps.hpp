#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "m1sim/basis.hpp"
#include "m1sim/bethe.hpp"
#include "m1sim/spectra.hpp"

namespace m1sim {

// Matrix-product form of the all-e^{±iπ/3} eigenstates. Bond index = (s, a)
// with s the 2-dimensional blockade register and a ∈ 0..f the particle
// count, so the bond dimension is 2(f+1) everywhere.
struct MpsState {
  int n_sites = 0;
  int fermion_number = 0;
  Branch branch = Branch::plus;
  // site_tensors[j-1][n] is A_j^n for occupation n of site j.
  std::vector<std::array<Eigen::MatrixXcd, 2>> site_tensors;
  Eigen::MatrixXcd boundary;

  int bond_dimension() const { return 2 * (fermion_number + 1); }
};

// Closed-form tensors of the special solution; requires the (N, f, branch)
// parity condition to hold.
MpsState build_special_mps(int n_sites, int fermion_number, Branch branch);

// Coefficient φ(i_1..i_f) of the ordered creation string, evaluated as
// Tr(A_1^{n_1} ... A_N^{n_N} B). Zero for blocked configurations and for
// configurations with the wrong particle count.
Complex mps_amplitude(const MpsState& mps, const BasisState& config);

// Normalized state vector of mps_amplitude over the matching basis.
Vector mps_to_statevector(const MpsState& mps, const ConstrainedBasis& basis);

// Schmidt coefficients across a cut; at most 2(f+1) are nonzero.
std::vector<double> schmidt_spectrum(const MpsState& mps,
                                     const ConstrainedBasis& basis, const Cut& cut);
std::vector<double> schmidt_spectrum(const Vector& v, const ConstrainedBasis& basis,
                                     const Cut& cut);

}  // namespace m1sim
