#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "m1sim/bethe.hpp"
#include "m1sim/dynamics.hpp"
#include "m1sim/sparse.hpp"
#include "m1sim/spectra.hpp"

namespace m1sim {

inline constexpr const char* kLibraryVersion = "1.0.0";

// Coordinate triplet dump. Header line "N dim nnz hermitian_flag", then one
// "row col re im" line per stored entry in row-major order. Numbers use the
// shortest round-trippable decimal form, so equal operators dump to equal
// bytes.
void write_sparse_triplet(std::ostream& out, const SparseOperator& op);

// {"n_sites": ..., "sectors": [{"f": ..., "eigenvalues": [...],
//  "residuals": [...]}, ...]}. Sector -1 collects eigenpairs of operators
// diagonalized without sector resolution.
std::string spectrum_to_json(const Spectrum& spectrum);

// Aligned text report of the per-sector integer-eigenvalue census with a
// worst-distance audit column. Sectors without integer eigenvalues are
// omitted.
std::string integer_table_text(const std::map<int, std::vector<IntegerLine>>& table);
std::string integer_table_json(const std::map<int, std::vector<IntegerLine>>& table);

struct QuenchMetadata {
  int n_sites = 0;
  double mu = 0.0;
  double tolerance = 0.0;  // Krylov per-step error bound (0 on spectral runs)
};

// "t,fidelity,<observable names>" header plus one row per sample.
void write_quench_csv(std::ostream& out, const QuenchResult& result);
std::string quench_to_json(const QuenchResult& result, const QuenchMetadata& meta);

// {"N": ..., "f": ..., "mus": [[re, im], ...], "energy": ...,
//  "momentum_phase": [re, im], "residual": ...}
std::string bethe_solution_to_json(const BetheSolution& solution);
// Rebuilds the solution from its parameter list; derived fields in the
// document are recomputed, not trusted. Malformed documents raise the JSON
// parser's error (with byte position); inconsistent N/f/mus raise DomainError.
BetheSolution bethe_solution_from_json(const std::string& text);

// Plain-text statevector: first line is the dimension, then one "re im" line
// per amplitude over the ConstrainedBasis ordering.
void write_statevector(std::ostream& out, const Vector& v);
Vector read_statevector(std::istream& in);

}  // namespace m1sim
