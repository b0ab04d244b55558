#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace m1sim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

// Occupation pattern of n_sites fermionic modes on a ring, site i <-> bit (i-1).
struct BasisState {
  std::uint32_t bits = 0;
  int n_sites = 0;

  bool occupied(int site) const { return (bits >> (site - 1)) & 1u; }
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

constexpr int kMinSites = 3;
constexpr int kMaxSites = 32;

// True if no two cyclically adjacent sites are both occupied.
bool blockade_ok(std::uint32_t bits, int n_sites);

int fermion_count(std::uint32_t bits);

// Parity of the Jordan-Wigner string: (-1)^(number of occupied sites j < site).
int fermion_sign(const BasisState& state, int site);

// Cyclic shift of every occupied site i to i + shift.
BasisState translate(const BasisState& state, int shift);

// Reflection i -> n_sites + 1 - i.
BasisState spatial_invert(const BasisState& state);

// Occupations printed site 1..n_sites left to right, e.g. "0101".
std::string to_occupation_string(const BasisState& state);

// All blockade-allowed occupation patterns, grouped by fermion number
// (ascending) and sorted by numeric bit value within each sector.
class ConstrainedBasis {
 public:
  explicit ConstrainedBasis(int n_sites);

  int n_sites() const { return n_; }
  std::size_t dim() const { return states_.size(); }
  int max_fermions() const { return n_ / 2; }

  BasisState state(std::size_t index) const;
  std::uint32_t state_bits(std::size_t index) const { return states_[index]; }
  std::size_t index(const BasisState& state) const;
  std::size_t index_of_bits(std::uint32_t bits) const;
  bool contains(std::uint32_t bits) const;

  int sector_of_index(std::size_t index) const;
  // Half-open index range [begin, end) of the fermion-number-f sector.
  std::pair<std::size_t, std::size_t> sector_range(int f) const;
  std::size_t sector_dim(int f) const;

  const std::vector<std::uint32_t>& states() const { return states_; }

 private:
  int n_ = 0;
  std::vector<std::uint32_t> states_;
  std::vector<std::size_t> sector_begin_;  // max_fermions()+2 entries
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

ConstrainedBasis enumerate_basis(int n_sites);

// Amplitude-level symmetry actions including fermionic reordering signs.
// Moving the occupied block across the seam under translation contributes
// (-1)^(w(f-w)) with w sites wrapped; inversion contributes (-1)^(f(f-1)/2).
Vector translate_statevector(const ConstrainedBasis& basis, const Vector& v, int shift);
Vector invert_statevector(const ConstrainedBasis& basis, const Vector& v);

}  // namespace m1sim
