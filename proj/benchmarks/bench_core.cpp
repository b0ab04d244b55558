#include <benchmark/benchmark.h>

#include <random>

#include "m1sim/basis.hpp"
#include "m1sim/bethe.hpp"
#include "m1sim/dynamics.hpp"
#include "m1sim/operators.hpp"

using namespace m1sim;

namespace {

Vector random_state(const ConstrainedBasis& basis, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(basis.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v /= v.norm();
  return v;
}

}  // namespace

static void BM_basis_enumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ConstrainedBasis basis(n);
    benchmark::DoNotOptimize(basis.dim());
  }
}
BENCHMARK(BM_basis_enumeration)->Arg(16)->Arg(20)->Arg(24);

static void BM_build_m1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ConstrainedBasis basis(n);
  for (auto _ : state) {
    SparseOperator h = build_m1(basis);
    benchmark::DoNotOptimize(h.nnz());
  }
}
BENCHMARK(BM_build_m1)->Arg(12)->Arg(16)->Arg(18);

static void BM_sparse_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ConstrainedBasis basis(n);
  SparseOperator h = build_pxp(basis, {0.5});
  Vector v = random_state(basis, 7);
  for (auto _ : state) {
    Vector w = h.apply(v);
    benchmark::DoNotOptimize(w.squaredNorm());
  }
}
BENCHMARK(BM_sparse_apply)->Arg(16)->Arg(20);

static void BM_krylov_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ConstrainedBasis basis(n);
  SparseOperator h = build_pxp(basis, {0.5});
  Vector v = z2_state(basis);
  EvolveOptions options;
  options.method = PropagationMethod::krylov;
  for (auto _ : state) {
    Vector w = evolve(h, v, 0.5, options);
    benchmark::DoNotOptimize(w.squaredNorm());
  }
}
BENCHMARK(BM_krylov_step)->Arg(14)->Arg(18);

static void BM_bethe_state(benchmark::State& state) {
  const int f = static_cast<int>(state.range(0));
  ConstrainedBasis basis(12);
  BetheCandidate cand = special_solution(12, f, Branch::plus);
  for (auto _ : state) {
    Vector v = build_bethe_state(cand.solution->mus, basis);
    benchmark::DoNotOptimize(v.squaredNorm());
  }
}
BENCHMARK(BM_bethe_state)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
