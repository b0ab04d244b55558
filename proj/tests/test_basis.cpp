#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "m1sim/basis.hpp"
#include "m1sim/errors.hpp"

using namespace m1sim;

namespace {

// Independent oracle: filter every n-bit mask by the cyclic adjacency rule.
std::vector<std::uint32_t> brute_force_states(int n) {
  std::vector<std::uint32_t> out;
  const std::uint32_t top = 1u << n;
  for (std::uint32_t m = 0; m < top; ++m) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const int j = (i + 1) % n;
      if (((m >> i) & 1u) && ((m >> j) & 1u)) ok = false;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("enumeration matches the brute-force oracle for n = 3..16") {
  for (int n = 3; n <= 16; ++n) {
    const auto oracle = brute_force_states(n);
    const ConstrainedBasis basis(n);
    REQUIRE(basis.dim() == oracle.size());
    std::set<std::uint32_t> got(basis.states().begin(), basis.states().end());
    std::set<std::uint32_t> want(oracle.begin(), oracle.end());
    CHECK(got == want);
  }
}

TEST_CASE("dimensions are the Lucas numbers") {
  CHECK(ConstrainedBasis(3).dim() == 4);
  CHECK(ConstrainedBasis(4).dim() == 7);
  CHECK(ConstrainedBasis(12).dim() == 322);
  // L_n = L_{n-1} + L_{n-2}
  for (int n = 5; n <= 18; ++n) {
    CHECK(ConstrainedBasis(n).dim() ==
          ConstrainedBasis(n - 1).dim() + ConstrainedBasis(n - 2).dim());
  }
}

TEST_CASE("n = 3 basis is ordered vacuum, 100, 010, 001") {
  const ConstrainedBasis basis(3);
  REQUIRE(basis.dim() == 4);
  CHECK(to_occupation_string(basis.state(0)) == "000");
  CHECK(to_occupation_string(basis.state(1)) == "100");
  CHECK(to_occupation_string(basis.state(2)) == "010");
  CHECK(to_occupation_string(basis.state(3)) == "001");
}

TEST_CASE("sector-major ordering with ascending bit value inside sectors") {
  for (int n : {5, 8, 12}) {
    const ConstrainedBasis basis(n);
    std::size_t covered = 0;
    for (int f = 0; f <= basis.max_fermions(); ++f) {
      auto [b, e] = basis.sector_range(f);
      CHECK(b == covered);
      covered = e;
      CHECK(basis.sector_dim(f) == e - b);
      for (std::size_t i = b; i < e; ++i) {
        CHECK(fermion_count(basis.state_bits(i)) == f);
        CHECK(basis.sector_of_index(i) == f);
        if (i > b) CHECK(basis.state_bits(i - 1) < basis.state_bits(i));
      }
    }
    CHECK(covered == basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i)
      CHECK(fermion_count(basis.state_bits(i)) <= n / 2);
  }
}

TEST_CASE("index lookup round trips and rejects non-members") {
  const ConstrainedBasis basis(10);
  for (std::size_t i = 0; i < basis.dim(); ++i)
    CHECK(basis.index(basis.state(i)) == i);
  CHECK(!basis.contains(0b11u));
  CHECK_THROWS_AS(basis.index_of_bits(0b11u), DomainError);
  CHECK_THROWS_AS(basis.index(BasisState{0u, 9}), DomainError);
}

TEST_CASE("basis size limits") {
  CHECK_THROWS_AS(ConstrainedBasis(2), DomainError);
  CHECK_THROWS_AS(ConstrainedBasis(0), DomainError);
  CHECK_THROWS_AS(ConstrainedBasis(33), DomainError);
}

TEST_CASE("fermion_sign counts occupied sites strictly below") {
  // Sites {2,4} of n=6: one occupied site below site 4.
  const BasisState s{0b001010u, 6};
  CHECK(fermion_sign(s, 4) == -1);
  CHECK(fermion_sign(s, 2) == 1);
  CHECK(fermion_sign(s, 1) == 1);
  CHECK(fermion_sign(s, 6) == 1);
  CHECK_THROWS_AS(fermion_sign(s, 0), DomainError);
  CHECK_THROWS_AS(fermion_sign(s, 7), DomainError);
}

TEST_CASE("toggling a lower site flips fermion_sign above it") {
  std::mt19937 rng(7);
  const ConstrainedBasis basis(12);
  std::uniform_int_distribution<std::size_t> pick(0, basis.dim() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    BasisState s = basis.state(pick(rng));
    std::uniform_int_distribution<int> site_pick(1, 12);
    const int lower = site_pick(rng);
    BasisState toggled{s.bits ^ (1u << (lower - 1)), 12};
    for (int site = lower + 1; site <= 12; ++site)
      CHECK(fermion_sign(toggled, site) == -fermion_sign(s, site));
    for (int site = 1; site <= lower; ++site)
      CHECK(fermion_sign(toggled, site) == fermion_sign(s, site));
  }
}

TEST_CASE("translate is cyclic and preserves blockade and count") {
  const BasisState s{0b001001u, 6};  // "100100"
  CHECK(translate(s, 3) == s);
  CHECK(translate(s, -3) == s);
  CHECK(translate(s, 6) == s);

  std::mt19937 rng(11);
  const ConstrainedBasis basis(11);
  std::uniform_int_distribution<std::size_t> pick(0, basis.dim() - 1);
  std::uniform_int_distribution<int> shift_pick(-25, 25);
  for (int trial = 0; trial < 200; ++trial) {
    const BasisState a = basis.state(pick(rng));
    const int s1 = shift_pick(rng), s2 = shift_pick(rng);
    CHECK(translate(translate(a, s1), s2) == translate(a, s1 + s2));
    const BasisState t = translate(a, s1);
    CHECK(blockade_ok(t.bits, 11));
    CHECK(fermion_count(t.bits) == fermion_count(a.bits));
    CHECK(translate(t, -s1) == a);
  }
}

TEST_CASE("spatial_invert is an involution preserving the basis") {
  const ConstrainedBasis basis(9);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const BasisState s = basis.state(i);
    const BasisState r = spatial_invert(s);
    CHECK(blockade_ok(r.bits, 9));
    CHECK(spatial_invert(r) == s);
  }
  CHECK(to_occupation_string(spatial_invert(BasisState{0b000001u, 6})) == "000001");
  CHECK(to_occupation_string(spatial_invert(BasisState{0b000010u, 6})) == "000010");
  // site 1 -> site 6
  CHECK(to_occupation_string(spatial_invert(BasisState{1u, 6})) == "000001");
}

TEST_CASE("translate_statevector carries the seam reordering sign") {
  const ConstrainedBasis basis(4);
  // |{2,4}> -> c3 c5=c1 reordering across the seam gives a minus sign.
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  const auto src = basis.index_of_bits(0b1010u);
  v[static_cast<Eigen::Index>(src)] = 1.0;
  const Vector t = translate_statevector(basis, v, 1);
  const auto dst = basis.index_of_bits(0b0101u);
  CHECK(t[static_cast<Eigen::Index>(dst)] == Complex(-1.0, 0.0));
  CHECK(t.norm() == doctest::Approx(1.0));
}

TEST_CASE("statevector symmetries are unitary and compose") {
  const ConstrainedBasis basis(8);
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  Vector v(static_cast<Eigen::Index>(basis.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();

  Vector w = v;
  for (int k = 0; k < 8; ++k) w = translate_statevector(basis, w, 1);
  CHECK((w - v).norm() < 1e-14);

  const Vector t3 = translate_statevector(basis, v, 3);
  const Vector t111 = translate_statevector(
      basis, translate_statevector(basis, translate_statevector(basis, v, 1), 1), 1);
  CHECK((t3 - t111).norm() < 1e-14);
  CHECK(t3.norm() == doctest::Approx(1.0));

  const Vector r = invert_statevector(basis, v);
  CHECK(r.norm() == doctest::Approx(1.0));
  CHECK((invert_statevector(basis, r) - v).norm() < 1e-14);
}

TEST_CASE("invert_statevector reorders the creation string") {
  const ConstrainedBasis basis(4);
  // c1 c3 -> c4 c2 = -c2 c4
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.index_of_bits(0b0101u))] = 1.0;
  const Vector r = invert_statevector(basis, v);
  CHECK(r[static_cast<Eigen::Index>(basis.index_of_bits(0b1010u))] == Complex(-1.0, 0.0));
}
