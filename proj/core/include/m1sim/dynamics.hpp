#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "m1sim/basis.hpp"
#include "m1sim/sparse.hpp"

namespace m1sim {

enum class PropagationMethod { spectral, krylov };

struct EvolveOptions {
  // Spectral (exact eigendecomposition) up to this dimension, Krylov beyond.
  std::size_t dense_threshold = 4096;
  int krylov_dimension = 30;
  // A-posteriori error bound accepted per Krylov substep.
  double krylov_step_tol = 1e-10;
  std::size_t max_substeps = 1u << 20;
  std::optional<PropagationMethod> method;  // overrides the size-based choice
};

// Unitary evolution exp(-i H t) psi0 for hermitian H.
Vector evolve(const SparseOperator& h, const Vector& psi0, double t,
              const EvolveOptions& options = {});

struct NamedObservable {
  std::string name;
  const SparseOperator* op;  // must outlive the call
};

struct QuenchResult {
  std::vector<double> times;
  std::vector<double> fidelity;  // |<psi0|psi(t)>|^2
  std::map<std::string, std::vector<double>> observables;
  PropagationMethod method = PropagationMethod::spectral;
};

// Return fidelity |<psi0|psi(t)>|^2 and requested expectation values on the
// grid. times must be ascending and start at 0.
QuenchResult fidelity_series(const SparseOperator& h, const Vector& psi0,
                             const std::vector<double>& times,
                             const std::vector<NamedObservable>& observables = {},
                             const EvolveOptions& options = {});

// <F>(t) for a psi0 supported on a single fermion sector f. The result is
// checked against the supersymmetric bound f-1 <= <F>(t) <= f+1.
std::vector<double> fermion_number_trace(const SparseOperator& h, const Vector& psi0,
                                         const std::vector<double>& times,
                                         const EvolveOptions& options = {});

// Product state with every second site occupied (sites 2, 4, ..., N).
Vector z2_state(const ConstrainedBasis& basis);
// Product state with a single fermion on the given site.
Vector single_site_state(const ConstrainedBasis& basis, int site);
// Uniform grid [0, t_max] with the given number of samples.
std::vector<double> uniform_times(double t_max, std::size_t samples = 2000);

// Closed-form Z2 revival fidelity cos^2(sqrt(N/2) t) at mu = 0.
double z2_fidelity_analytic(int n_sites, double t);
// Exact single-fermion fidelity (1/N^2) (sum_k cos(sqrt(E_k) t))^2 with
// E_k = N - 2 + 2 cos k over the N momenta k = 2 pi n / N.
double single_fermion_fidelity_exact(int n_sites, double t);
// Large-N approximation cos^2(sqrt(N-2) t) J0^2(t / sqrt(N-2)).
double single_fermion_fidelity_bessel(int n_sites, double t);

// Bessel function of the first kind, order zero; absolute accuracy better
// than 1e-10 for |x| <= 100.
double bessel_j0(double x);

}  // namespace m1sim
