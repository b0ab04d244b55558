#include "m1sim/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "m1sim/errors.hpp"
#include "m1sim/parallel.hpp"

namespace m1sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpecialTol = 1e-12;
constexpr double kConditionTol = 1e-9;

const Complex kOmegaPlus{0.5, std::sqrt(3.0) / 2.0};
const Complex kOmegaMinus{0.5, -std::sqrt(3.0) / 2.0};

bool is_special(Complex mu) {
  return std::abs(mu - kOmegaPlus) <= kSpecialTol ||
         std::abs(mu - kOmegaMinus) <= kSpecialTol;
}

void require_nonzero(const std::vector<Complex>& mus) {
  for (const Complex& mu : mus)
    if (std::abs(mu) <= kSpecialTol)
      throw DomainError("Bethe parameters must be nonzero");
}

Complex parity_sign(int f) { return (f - 1) % 2 == 0 ? 1.0 : -1.0; }

// Unit phase e^{i 2π num / den} with the exponent reduced in integer
// arithmetic, so that full turns are exact.
Complex reduced_phase(long long num, long long den) {
  num %= den;
  if (num < 0) num += den;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(num) /
                             static_cast<double>(den));
}

// A_P relative to A_identity = 1, as the product of one phase shift per
// inverted pair of parameter indices.
Complex permutation_amplitude(const std::vector<Complex>& mus,
                              const std::vector<int>& perm) {
  Complex amp = 1.0;
  for (std::size_t a = 0; a + 1 < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b])
        amp *= scattering_g(mus[static_cast<std::size_t>(perm[a])],
                            mus[static_cast<std::size_t>(perm[b])]);
  return amp;
}

std::vector<int> occupied_sites(std::uint32_t bits, int n_sites) {
  std::vector<int> sites;
  for (int site = 1; site <= n_sites; ++site)
    if ((bits >> (site - 1)) & 1u) sites.push_back(site);
  return sites;
}

BetheCandidate inadmissible(std::vector<ConditionCheck> checks) {
  BetheCandidate candidate;
  candidate.conditions = std::move(checks);
  return candidate;
}

}  // namespace

Complex scattering_g(Complex mu_j, Complex mu_k) {
  const bool j_special = is_special(mu_j);
  const bool k_special = is_special(mu_k);
  if (j_special && k_special && std::abs(mu_j - mu_k) <= kSpecialTol) return 1.0;
  if (j_special) {
    if (std::abs(mu_k) <= kSpecialTol)
      throw DomainError("phase shift pole: zero second argument");
    return -1.0 / mu_k;
  }
  if (k_special) return -mu_j;

  const Complex numerator = mu_j * (mu_j * mu_k - mu_j + 1.0);
  const Complex denominator = mu_k * (mu_j * mu_k - mu_k + 1.0);
  const double scale = std::max(1.0, std::abs(mu_j * mu_k));
  if (std::abs(denominator) <= 1e-13 * scale)
    throw DomainError("phase shift undefined: vanishing denominator away from "
                      "the trivially scattering points");
  return -numerator / denominator;
}

double bethe_energy(const std::vector<Complex>& mus, int n_sites) {
  require_nonzero(mus);
  Complex energy = static_cast<double>(n_sites) - 2.0 * static_cast<double>(mus.size());
  for (const Complex& mu : mus) energy += mu + 1.0 / mu;
  if (std::abs(energy.imag()) > 1e-9)
    throw DomainError("Bethe parameters give a complex energy");
  return energy.real();
}

double bethe_residuals(const std::vector<Complex>& mus, int n_sites) {
  require_nonzero(mus);
  const int f = static_cast<int>(mus.size());
  double worst = 0.0;
  for (int j = 0; j < f; ++j) {
    const Complex lhs = std::pow(mus[static_cast<std::size_t>(j)],
                                 static_cast<double>(n_sites));
    Complex rhs = parity_sign(f);
    for (int k = 0; k < f; ++k)
      if (k != j)
        rhs *= scattering_g(mus[static_cast<std::size_t>(j)],
                            mus[static_cast<std::size_t>(k)]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

BetheSolution make_bethe_solution(std::vector<Complex> mus, int n_sites) {
  if (n_sites < kMinSites)
    throw DomainError("Bethe solutions need at least 3 sites");
  if (2 * mus.size() > static_cast<std::size_t>(n_sites))
    throw DomainError("fermion number exceeds the blockade capacity floor(N/2)");
  require_nonzero(mus);
  for (std::size_t a = 0; a + 1 < mus.size(); ++a)
    for (std::size_t b = a + 1; b < mus.size(); ++b)
      if (std::abs(mus[a] - mus[b]) <= kSpecialTol && !is_special(mus[a]))
        throw DomainError("coinciding Bethe parameters are only allowed at the "
                          "trivially scattering points e^{±iπ/3}");

  BetheSolution solution;
  solution.n_sites = n_sites;
  solution.fermion_number = static_cast<int>(mus.size());
  solution.momentum_phase =
      std::accumulate(mus.begin(), mus.end(), Complex(1.0), std::multiplies<>());
  solution.energy = bethe_energy(mus, n_sites);
  solution.residual_norm = bethe_residuals(mus, n_sites);
  solution.mus = std::move(mus);
  return solution;
}

Vector build_bethe_state(const std::vector<Complex>& mus,
                         const ConstrainedBasis& basis) {
  const int f = static_cast<int>(mus.size());
  if (f > kBetheMaxFermions)
    throw DomainError("permutation sum capped at 8 fermions (8! terms)");
  if (f > basis.max_fermions())
    throw DomainError("fermion number exceeds the blockade capacity floor(N/2)");
  require_nonzero(mus);

  std::vector<std::vector<int>> perms;
  std::vector<Complex> amplitudes;
  std::vector<int> perm(static_cast<std::size_t>(f));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
    amplitudes.push_back(permutation_amplitude(mus, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  Vector state = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  const auto [begin, end] = basis.sector_range(f);
  parallel_for_chunks(begin, end, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::vector<Complex>> powers(static_cast<std::size_t>(f));
    for (std::size_t i = lo; i < hi; ++i) {
      const std::vector<int> sites = occupied_sites(basis.state_bits(i), basis.n_sites());
      for (std::size_t m = 0; m < static_cast<std::size_t>(f); ++m) {
        powers[m].resize(sites.size());
        for (std::size_t j = 0; j < sites.size(); ++j)
          powers[m][j] = std::pow(mus[m], static_cast<double>(sites[j]));
      }
      Complex amplitude = 0.0;
      for (std::size_t p = 0; p < perms.size(); ++p) {
        Complex term = amplitudes[p];
        for (std::size_t j = 0; j < sites.size(); ++j)
          term *= powers[static_cast<std::size_t>(perms[p][j])][j];
        amplitude += term;
      }
      state[static_cast<Eigen::Index>(i)] = amplitude;
    }
  });

  const double norm = state.norm();
  if (norm < 1e-12)
    throw DomainError("Bethe wavefunction vanishes: inadmissible parameter set");
  return state / norm;
}

BetheCandidate special_solution(int n_sites, int fermion_number, Branch branch) {
  if (n_sites < kMinSites)
    throw DomainError("Bethe solutions need at least 3 sites");
  if (fermion_number < 1 || 2 * fermion_number > n_sites)
    throw DomainError("fermion number must lie in [1, floor(N/2)]");

  const int sign = branch == Branch::plus ? 1 : -1;
  ConditionCheck parity;
  parity.name = branch == Branch::plus ? "branch-plus parity" : "branch-minus parity";
  parity.lhs = reduced_phase(sign * n_sites, 6);
  parity.rhs = parity_sign(fermion_number);
  parity.holds = std::abs(parity.lhs - parity.rhs) <= kConditionTol;
  if (!parity.holds) return inadmissible({parity});

  const Complex mu = branch == Branch::plus ? kOmegaPlus : kOmegaMinus;
  BetheCandidate candidate;
  candidate.conditions.push_back(parity);
  candidate.solution = make_bethe_solution(
      std::vector<Complex>(static_cast<std::size_t>(fermion_number), mu), n_sites);
  const double exact = static_cast<double>(n_sites - fermion_number);
  if (std::abs(candidate.solution->energy - exact) > 1e-9 ||
      candidate.solution->residual_norm > kBetheResidualTol)
    throw ConsistencyError("admissible special solution failed verification");
  candidate.solution->energy = exact;
  return candidate;
}

BetheCandidate dress_solution(const BetheSolution& base, int n_plus, int n_minus) {
  if (base.residual_norm > kBetheResidualTol)
    throw DomainError("dressing requires a verified base solution");
  if (n_plus < 0 || n_minus < 0 || n_plus + n_minus == 0)
    throw DomainError("dressing counts must be nonnegative and not both zero");

  std::vector<ConditionCheck> checks;
  if (n_plus >= 1) {
    ConditionCheck check;
    check.name = "plus-mode closure";
    check.lhs = reduced_phase(base.n_sites + n_plus, 6);
    check.rhs = parity_sign(n_plus) / base.momentum_phase;
    check.holds = std::abs(check.lhs - check.rhs) <= kConditionTol;
    checks.push_back(check);
  }
  if (n_minus >= 1) {
    ConditionCheck check;
    check.name = "minus-mode closure";
    check.lhs = reduced_phase(-(base.n_sites + n_minus), 6);
    check.rhs = parity_sign(n_minus) * base.momentum_phase;
    check.holds = std::abs(check.lhs - check.rhs) <= kConditionTol;
    checks.push_back(check);
  }
  if (!std::all_of(checks.begin(), checks.end(),
                   [](const ConditionCheck& check) { return check.holds; }))
    return inadmissible(std::move(checks));

  std::vector<Complex> mus = base.mus;
  mus.insert(mus.end(), static_cast<std::size_t>(n_plus), kOmegaPlus);
  mus.insert(mus.end(), static_cast<std::size_t>(n_minus), kOmegaMinus);
  BetheCandidate candidate;
  candidate.conditions = std::move(checks);
  candidate.solution =
      make_bethe_solution(std::move(mus), base.n_sites + n_plus + n_minus);
  if (candidate.solution->residual_norm > kBetheResidualTol)
    throw ConsistencyError("dressed solution failed residual verification");
  return candidate;
}

std::vector<BetheSolution> single_fermion_solutions(int n_sites) {
  if (n_sites < kMinSites)
    throw DomainError("Bethe solutions need at least 3 sites");
  std::vector<BetheSolution> solutions;
  solutions.reserve(static_cast<std::size_t>(n_sites));
  for (int n = 0; n < n_sites; ++n) {
    BetheSolution solution =
        make_bethe_solution({reduced_phase(n, n_sites)}, n_sites);
    const double exact =
        n_sites - 2 + 2.0 * std::cos(2.0 * kPi * n / n_sites);
    if (std::abs(solution.energy - exact) > 1e-12 ||
        solution.residual_norm > 1e-12)
      throw ConsistencyError("plane-wave solution failed verification");
    solution.energy = exact;
    solution.residual_norm = 0.0;  // μ^N = 1 exactly, by construction
    solutions.push_back(std::move(solution));
  }
  return solutions;
}

BetheSolution inversion_partner(const BetheSolution& sol) {
  if (sol.residual_norm > kBetheResidualTol)
    throw DomainError("inversion partner requires a verified solution");
  std::vector<Complex> inverted;
  inverted.reserve(sol.mus.size());
  for (const Complex& mu : sol.mus) inverted.push_back(1.0 / mu);
  BetheSolution partner = make_bethe_solution(std::move(inverted), sol.n_sites);
  if (partner.residual_norm > kBetheResidualTol)
    throw ConsistencyError("inverted parameters failed residual verification");
  return partner;
}

}  // namespace m1sim
