#pragma once

#include <optional>
#include <string>
#include <vector>

#include "m1sim/basis.hpp"

namespace m1sim {

constexpr double kBetheResidualTol = 1e-10;
// Permutation-sum construction cap: f! terms per configuration.
constexpr int kBetheMaxFermions = 8;

// Bare two-excitation phase shift. The special values e^{±iπ/3} scatter
// trivially: g = 1 for a coinciding special pair, g(special, μ) = -1/μ,
// g(μ, special) = -μ. A vanishing denominator outside those cases is a
// domain error.
Complex scattering_g(Complex mu_j, Complex mu_k);

// E = N - 2f + Σ_j (μ_j + 1/μ_j); the imaginary part must be negligible.
double bethe_energy(const std::vector<Complex>& mus, int n_sites);

// max_j |μ_j^N - (-1)^{f-1} ∏_{k≠j} g(μ_j, μ_k)|; small values certify a
// solution of the Bethe equations.
double bethe_residuals(const std::vector<Complex>& mus, int n_sites);

struct BetheSolution {
  std::vector<Complex> mus;
  int n_sites = 0;
  int fermion_number = 0;
  Complex momentum_phase;  // e^{ip} = μ_1 μ_2 ... μ_f
  double energy = 0.0;
  double residual_norm = 0.0;
};

// Computes the derived fields for a candidate parameter set. Coinciding
// parameters are rejected unless they equal e^{±iπ/3}.
BetheSolution make_bethe_solution(std::vector<Complex> mus, int n_sites);

// Normalized state vector from the permutation-sum wavefunction over
// blockade-respecting configurations. Capped at 8 parameters.
Vector build_bethe_state(const std::vector<Complex>& mus,
                         const ConstrainedBasis& basis);

enum class Branch { plus, minus };

struct ConditionCheck {
  std::string name;
  Complex lhs;
  Complex rhs;
  bool holds = false;
};

// Result of constructing a distinguished solution: the solution when every
// admissibility condition holds, and the evaluated conditions either way.
struct BetheCandidate {
  std::optional<BetheSolution> solution;
  std::vector<ConditionCheck> conditions;
  bool admissible() const { return solution.has_value(); }
};

// f copies of e^{±iπ/3}; admissible iff e^{±iπN/3} = (-1)^{f-1}, with
// energy exactly N - f.
BetheCandidate special_solution(int n_sites, int fermion_number, Branch branch);

// Appends n_plus copies of e^{iπ/3} and n_minus copies of e^{-iπ/3} to a
// verified solution, moving it to the lattice of N + n_plus + n_minus sites.
BetheCandidate dress_solution(const BetheSolution& base, int n_plus, int n_minus);

// The N plane-wave solutions μ = e^{2πin/N} with E = N - 2 + 2cos(2πn/N).
std::vector<BetheSolution> single_fermion_solutions(int n_sites);

// μ_j -> 1/μ_j: the solution with opposite momentum and the same energy.
BetheSolution inversion_partner(const BetheSolution& sol);

}  // namespace m1sim
