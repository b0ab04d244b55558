#include "m1sim/basis.hpp"

#include <algorithm>
#include <bit>

#include "m1sim/errors.hpp"

namespace m1sim {

namespace {

std::uint32_t site_mask(int n) {
  return n == 32 ? 0xffffffffu : ((1u << n) - 1u);
}

void check_site(const BasisState& state, int site) {
  if (site < 1 || site > state.n_sites)
    throw DomainError("site index out of range [1, n_sites]");
}

void check_state(const BasisState& state) {
  if (state.n_sites < kMinSites || state.n_sites > kMaxSites)
    throw DomainError("state has invalid n_sites");
  if (state.bits & ~site_mask(state.n_sites))
    throw DomainError("state has bits above site n_sites");
}

// All f-fermion patterns with the cyclic blockade, ascending site choice.
void collect_sector(int n, int f, int next_site, int first_site, std::uint32_t acc,
                    int placed, std::vector<std::uint32_t>& out) {
  if (placed == f) {
    out.push_back(acc);
    return;
  }
  // Site n is unavailable when site 1 is occupied (ring adjacency).
  const int last_allowed = (first_site == 1) ? n - 1 : n;
  for (int i = next_site; i <= last_allowed - 2 * (f - placed - 1); ++i) {
    collect_sector(n, f, i + 2, placed == 0 ? i : first_site,
                   acc | (1u << (i - 1)), placed + 1, out);
  }
}

}  // namespace

bool blockade_ok(std::uint32_t bits, int n_sites) {
  const std::uint32_t m = site_mask(n_sites);
  bits &= m;
  const std::uint32_t rotated = ((bits << 1) | (bits >> (n_sites - 1))) & m;
  return (bits & rotated) == 0;
}

int fermion_count(std::uint32_t bits) { return std::popcount(bits); }

int fermion_sign(const BasisState& state, int site) {
  check_state(state);
  check_site(state, site);
  const std::uint32_t below = state.bits & ((1u << (site - 1)) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

BasisState translate(const BasisState& state, int shift) {
  check_state(state);
  const int n = state.n_sites;
  int s = shift % n;
  if (s < 0) s += n;
  if (s == 0) return state;
  const std::uint32_t m = site_mask(n);
  const std::uint32_t b = state.bits & m;
  return BasisState{((b << s) | (b >> (n - s))) & m, n};
}

BasisState spatial_invert(const BasisState& state) {
  check_state(state);
  std::uint32_t out = 0;
  for (int i = 1; i <= state.n_sites; ++i)
    if (state.occupied(i)) out |= 1u << (state.n_sites - i);
  return BasisState{out, state.n_sites};
}

std::string to_occupation_string(const BasisState& state) {
  std::string s(static_cast<std::size_t>(state.n_sites), '0');
  for (int i = 1; i <= state.n_sites; ++i)
    if (state.occupied(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  return s;
}

ConstrainedBasis::ConstrainedBasis(int n_sites) : n_(n_sites) {
  if (n_sites < kMinSites)
    throw DomainError("n_sites must be at least 3 for a well-defined ring blockade");
  if (n_sites > kMaxSites)
    throw DomainError("n_sites capped at 32 (one machine word per state)");

  sector_begin_.assign(static_cast<std::size_t>(max_fermions()) + 2, 0);
  std::vector<std::uint32_t> sector;
  for (int f = 0; f <= max_fermions(); ++f) {
    sector.clear();
    collect_sector(n_, f, 1, 0, 0u, 0, sector);
    std::sort(sector.begin(), sector.end());
    sector_begin_[static_cast<std::size_t>(f)] = states_.size();
    states_.insert(states_.end(), sector.begin(), sector.end());
  }
  sector_begin_[static_cast<std::size_t>(max_fermions()) + 1] = states_.size();

  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

ConstrainedBasis enumerate_basis(int n_sites) { return ConstrainedBasis(n_sites); }

BasisState ConstrainedBasis::state(std::size_t index) const {
  if (index >= states_.size()) throw DomainError("basis index out of range");
  return BasisState{states_[index], n_};
}

std::size_t ConstrainedBasis::index(const BasisState& state) const {
  if (state.n_sites != n_) throw DomainError("state n_sites does not match basis");
  return index_of_bits(state.bits);
}

std::size_t ConstrainedBasis::index_of_bits(std::uint32_t bits) const {
  auto it = index_.find(bits);
  if (it == index_.end())
    throw DomainError("occupation pattern is not in the blockade-constrained basis");
  return it->second;
}

bool ConstrainedBasis::contains(std::uint32_t bits) const {
  return index_.find(bits) != index_.end();
}

int ConstrainedBasis::sector_of_index(std::size_t index) const {
  if (index >= states_.size()) throw DomainError("basis index out of range");
  return fermion_count(states_[index]);
}

std::pair<std::size_t, std::size_t> ConstrainedBasis::sector_range(int f) const {
  if (f < 0 || f > max_fermions())
    throw DomainError("fermion sector out of range [0, n_sites/2]");
  return {sector_begin_[static_cast<std::size_t>(f)],
          sector_begin_[static_cast<std::size_t>(f) + 1]};
}

std::size_t ConstrainedBasis::sector_dim(int f) const {
  auto [b, e] = sector_range(f);
  return e - b;
}

Vector translate_statevector(const ConstrainedBasis& basis, const Vector& v, int shift) {
  if (v.size() != static_cast<Eigen::Index>(basis.dim()))
    throw DomainError("vector dimension does not match basis");
  const int n = basis.n_sites();
  int s = shift % n;
  if (s < 0) s += n;
  Vector out = Vector::Zero(v.size());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const BasisState src = basis.state(i);
    const BasisState dst = translate(src, s);
    const int f = fermion_count(src.bits);
    // Sites i > n - s wrap to the front of the ordered creation string.
    int wrapped = 0;
    for (int site = n - s + 1; site <= n; ++site)
      if (src.occupied(site)) ++wrapped;
    const int sign = ((wrapped * (f - wrapped)) & 1) ? -1 : 1;
    out[static_cast<Eigen::Index>(basis.index(dst))] =
        static_cast<double>(sign) * v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Vector invert_statevector(const ConstrainedBasis& basis, const Vector& v) {
  if (v.size() != static_cast<Eigen::Index>(basis.dim()))
    throw DomainError("vector dimension does not match basis");
  Vector out = Vector::Zero(v.size());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const BasisState src = basis.state(i);
    const BasisState dst = spatial_invert(src);
    const int f = fermion_count(src.bits);
    const int sign = ((f * (f - 1) / 2) & 1) ? -1 : 1;
    out[static_cast<Eigen::Index>(basis.index(dst))] =
        static_cast<double>(sign) * v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace m1sim
