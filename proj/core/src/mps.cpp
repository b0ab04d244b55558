#include "m1sim/mps.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "m1sim/errors.hpp"
#include "m1sim/parallel.hpp"

namespace m1sim {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// e^{sign·iπ j/3} with the exponent reduced modulo full turns.
Complex site_phase(int site, int sign) {
  int sixth = (sign * site) % 6;
  if (sixth < 0) sixth += 6;
  return std::polar(1.0, std::numbers::pi * sixth / 3.0);
}

}  // namespace

MpsState build_special_mps(int n_sites, int fermion_number, Branch branch) {
  const BetheCandidate candidate = special_solution(n_sites, fermion_number, branch);
  if (!candidate.admissible())
    throw DomainError("no special eigenstate at this (N, f, branch): the parity "
                      "condition fails");

  const Eigen::Index chain = fermion_number + 1;
  Eigen::MatrixXcd blocked(2, 2), open(2, 2);
  blocked << 0, 1, 0, 0;
  open << 0, 0, 1, 1;
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(chain, chain);
  for (Eigen::Index a = 0; a + 1 < chain; ++a) shift(a, a + 1) = 1.0;
  Eigen::MatrixXcd closure = Eigen::MatrixXcd::Zero(chain, chain);
  closure(chain - 1, 0) = 1.0;

  MpsState mps;
  mps.n_sites = n_sites;
  mps.fermion_number = fermion_number;
  mps.branch = branch;
  mps.boundary = kron(Eigen::MatrixXcd::Identity(2, 2), closure);
  const Eigen::MatrixXcd empty = kron(open, Eigen::MatrixXcd::Identity(chain, chain));
  const Eigen::MatrixXcd occupied = kron(blocked, shift);
  const int sign = branch == Branch::plus ? 1 : -1;
  mps.site_tensors.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 1; j <= n_sites; ++j)
    mps.site_tensors.push_back({empty, site_phase(j, sign) * occupied});
  return mps;
}

Complex mps_amplitude(const MpsState& mps, const BasisState& config) {
  if (config.n_sites != mps.n_sites)
    throw DomainError("configuration and MPS describe different rings");
  Eigen::MatrixXcd product = mps.site_tensors[0][config.occupied(1) ? 1 : 0];
  for (int j = 2; j <= mps.n_sites; ++j)
    product *= mps.site_tensors[static_cast<std::size_t>(j - 1)]
                               [config.occupied(j) ? 1 : 0];
  return (product * mps.boundary).trace();
}

Vector mps_to_statevector(const MpsState& mps, const ConstrainedBasis& basis) {
  if (basis.n_sites() != mps.n_sites)
    throw DomainError("basis and MPS describe different rings");
  Vector state(static_cast<Eigen::Index>(basis.dim()));
  parallel_for_chunks(0, basis.dim(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      state[static_cast<Eigen::Index>(i)] = mps_amplitude(mps, basis.state(i));
  });
  const double norm = state.norm();
  if (norm < 1e-12)
    throw ConsistencyError("MPS trace evaluated to the zero vector");
  return state / norm;
}

std::vector<double> schmidt_spectrum(const MpsState& mps,
                                     const ConstrainedBasis& basis, const Cut& cut) {
  return schmidt_values(mps_to_statevector(mps, basis), basis, cut);
}

std::vector<double> schmidt_spectrum(const Vector& v, const ConstrainedBasis& basis,
                                     const Cut& cut) {
  return schmidt_values(v, basis, cut);
}

}  // namespace m1sim
