#pragma once

#include "m1sim/basis.hpp"
#include "m1sim/sparse.hpp"

namespace m1sim {

struct ModelParams {
  double mu = 0.0;  // chemical-potential coupling of the fermion number
};

// Supercharge Q: removes one fermion wherever both neighbours are empty,
// with Jordan-Wigner signs from fermion_sign. Nilpotent, lowers the
// fermion number by one.
SparseOperator build_supercharge(const ConstrainedBasis& basis);

// Supersymmetric Hamiltonian H = Q Qdag + Qdag Q (positive semi-definite,
// block diagonal in the fermion number).
SparseOperator build_m1(const ConstrainedBasis& basis);

// The same Hamiltonian written directly as projected nearest-neighbour
// hopping plus the projector potential, signs from fermion_sign, periodic
// indices. Kept separate so the two constructions can be compared entry
// by entry.
SparseOperator build_m1_literal(const ConstrainedBasis& basis);

// H = Q + Qdag + mu F: constrained single-site creation/annihilation with
// a fermion-number bias.
SparseOperator build_pxp(const ConstrainedBasis& basis, const ModelParams& params);

// Diagonal fermion-number operator F.
SparseOperator build_fermion_number(const ConstrainedBasis& basis);

}  // namespace m1sim
