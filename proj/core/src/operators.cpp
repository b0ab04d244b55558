#include "m1sim/operators.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

#include "m1sim/errors.hpp"
#include "m1sim/parallel.hpp"

namespace m1sim {

namespace {

int wrap_site(int site, int n) {
  int s = (site - 1) % n;
  if (s < 0) s += n;
  return s + 1;
}

// Assembles triplets column by column: generate(source_index, source_state,
// emit(target_bits, amplitude)). Chunks of source states are processed in
// parallel; a coordinate can only be hit from one source state, so the
// chunking never changes the assembled matrix.
template <typename Generator>
SparseOperator build_from_columns(const ConstrainedBasis& basis, Generator&& generate,
                                  bool hermitian) {
  const std::size_t dim = basis.dim();
  std::vector<std::vector<Triplet>> buffers;
  std::mutex buffers_mutex;

  parallel_for_chunks(0, dim, [&](std::size_t lo, std::size_t hi) {
    std::vector<Triplet> local;
    local.reserve((hi - lo) * static_cast<std::size_t>(basis.n_sites() + 1));
    for (std::size_t col = lo; col < hi; ++col) {
      const BasisState source = basis.state(col);
      generate(col, source, [&](std::uint32_t target_bits, double amplitude) {
        if (amplitude == 0.0) return;
        local.emplace_back(static_cast<int>(basis.index_of_bits(target_bits)),
                           static_cast<int>(col), Complex(amplitude, 0.0));
      });
    }
    std::lock_guard<std::mutex> lock(buffers_mutex);
    buffers.emplace_back(std::move(local));
  });

  // Merge in source order so assembly is independent of thread scheduling.
  std::sort(buffers.begin(), buffers.end(),
            [](const std::vector<Triplet>& a, const std::vector<Triplet>& b) {
              if (a.empty() || b.empty()) return b.empty() < a.empty();
              return a.front().col() < b.front().col();
            });
  std::vector<Triplet> triplets;
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  triplets.reserve(total);
  for (const auto& b : buffers) triplets.insert(triplets.end(), b.begin(), b.end());
  return SparseOperator::from_triplets(basis, triplets, hermitian);
}

}  // namespace

SparseOperator build_supercharge(const ConstrainedBasis& basis) {
  const int n = basis.n_sites();
  return build_from_columns(
      basis,
      [n](std::size_t, const BasisState& s, auto&& emit) {
        for (int site = 1; site <= n; ++site) {
          if (!s.occupied(site)) continue;
          // Blockade guarantees the neighbour projectors are satisfied here.
          emit(s.bits ^ (1u << (site - 1)), static_cast<double>(fermion_sign(s, site)));
        }
      },
      false);
}

SparseOperator build_fermion_number(const ConstrainedBasis& basis) {
  return build_from_columns(
      basis,
      [](std::size_t, const BasisState& s, auto&& emit) {
        emit(s.bits, static_cast<double>(fermion_count(s.bits)));
      },
      true);
}

SparseOperator build_m1(const ConstrainedBasis& basis) {
  const SparseOperator q = build_supercharge(basis);
  const SparseOperator qd = q.adjoint();
  return (q * qd + qd * q).with_hermitian_flag(true);
}

SparseOperator build_m1_literal(const ConstrainedBasis& basis) {
  const int n = basis.n_sites();
  return build_from_columns(
      basis,
      [n](std::size_t, const BasisState& s, auto&& emit) {
        double potential = 0.0;
        for (int i = 1; i <= n; ++i) {
          const int left = wrap_site(i - 1, n);
          const int right = wrap_site(i + 1, n);
          if (!s.occupied(left) && !s.occupied(right)) potential += 1.0;
        }
        emit(s.bits, potential);

        for (int i = 1; i <= n; ++i) {
          const int j = wrap_site(i + 1, n);           // bond (i, i+1)
          const int outer_left = wrap_site(i - 1, n);  // projector sites
          const int outer_right = wrap_site(i + 2, n);
          if (s.occupied(outer_left) || s.occupied(outer_right)) continue;

          // c_i^dag c_{i+1}: fermion moves j -> i.
          if (s.occupied(j) && !s.occupied(i)) {
            const int sign_remove = fermion_sign(s, j);
            const BasisState mid{s.bits ^ (1u << (j - 1)), s.n_sites};
            const int sign_add = fermion_sign(mid, i);
            emit(mid.bits | (1u << (i - 1)),
                 static_cast<double>(sign_remove * sign_add));
          }
          // c_{i+1}^dag c_i: fermion moves i -> j.
          if (s.occupied(i) && !s.occupied(j)) {
            const int sign_remove = fermion_sign(s, i);
            const BasisState mid{s.bits ^ (1u << (i - 1)), s.n_sites};
            const int sign_add = fermion_sign(mid, j);
            emit(mid.bits | (1u << (j - 1)),
                 static_cast<double>(sign_remove * sign_add));
          }
        }
      },
      true);
}

SparseOperator build_pxp(const ConstrainedBasis& basis, const ModelParams& params) {
  const SparseOperator q = build_supercharge(basis);
  SparseOperator h = q + q.adjoint();
  if (params.mu != 0.0)
    h = h + build_fermion_number(basis).scaled(Complex(params.mu, 0.0));
  return h.with_hermitian_flag(true);
}

}  // namespace m1sim
