#include "m1sim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "m1sim/errors.hpp"

namespace m1sim {

namespace {

struct BlockEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  bool complete = true;
};

BlockEigen dense_eigen(const Eigen::MatrixXcd& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
  if (solver.info() != Eigen::Success)
    throw ConsistencyError("dense eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors(), true};
}

// Lanczos with full reorthogonalization. Converges distinct extremal
// eigenvalues of a hermitian operator; degenerate multiplicities collapse to
// a single Ritz pair because a single Krylov sequence cannot separate them.
BlockEigen lanczos_extremal(const std::function<Vector(const Vector&)>& apply_op,
                            std::size_t dim, const DiagOptions& options) {
  const int pairs = options.iterative_pairs;
  if (pairs < 1) throw DomainError("iterative_pairs must be positive");
  if (static_cast<std::size_t>(pairs) > dim)
    throw DomainError("iterative_pairs exceeds the block dimension");
  const int max_steps =
      static_cast<int>(std::min<std::size_t>(dim, options.max_lanczos_iterations));

  std::mt19937 rng(0x51c3d5ee);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd v(dim, max_steps + 1);
  for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, 0) = Complex(gauss(rng), gauss(rng));
  v.col(0).normalize();

  std::vector<double> alpha, beta;
  double scale = 1.0;
  double achieved = std::numeric_limits<double>::infinity();

  for (int j = 0; j < max_steps; ++j) {
    Vector w = apply_op(v.col(j));
    const double a = v.col(j).dot(w).real();
    alpha.push_back(a);
    w -= a * v.col(j);
    if (j > 0) w -= beta.back() * v.col(j - 1);
    for (int sweep = 0; sweep < 2; ++sweep)
      w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});
    const bool exhausted = b <= 1e-13 * scale;
    const int m = j + 1;

    if (m >= pairs) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
      for (int i = 0; i + 1 < m; ++i)
        t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(t);
      const Eigen::VectorXd& theta = tsolver.eigenvalues();
      const Eigen::MatrixXd& s = tsolver.eigenvectors();

      double worst = 0.0;
      for (int k = 0; k < pairs; ++k) {
        const int col = options.iterative_largest ? m - 1 - k : k;
        const double est = b * std::abs(s(m - 1, col));
        worst = std::max(worst, est / std::max(1.0, std::abs(theta(col))));
      }
      achieved = std::min(achieved, worst);
      if (worst <= options.residual_tol || exhausted) {
        BlockEigen out;
        out.complete = false;
        out.values.resize(pairs);
        out.vectors.resize(static_cast<Eigen::Index>(dim), pairs);
        for (int k = 0; k < pairs; ++k) {
          const int col = options.iterative_largest ? m - pairs + k : k;
          out.values(k) = theta(col);
          out.vectors.col(k) = v.leftCols(m) * s.col(col);
          out.vectors.col(k).normalize();
        }
        return out;
      }
    }
    if (exhausted)
      throw ConvergenceError(
          "Krylov space exhausted before the requested eigenpairs converged",
          achieved);
    beta.push_back(b);
    v.col(j + 1) = w / b;
  }
  throw ConvergenceError("Lanczos did not reach the residual tolerance", achieved);
}

void append_block(Spectrum& out, const BlockEigen& block, std::size_t offset,
                  int sector_label) {
  const auto base = static_cast<Eigen::Index>(out.eigenvalues.size());
  for (Eigen::Index k = 0; k < block.values.size(); ++k) {
    out.eigenvalues.push_back(block.values(k));
    out.sector_labels.push_back(sector_label);
    out.eigenvectors.col(base + k)
        .segment(static_cast<Eigen::Index>(offset), block.vectors.rows()) =
        block.vectors.col(k);
  }
}

}  // namespace

Spectrum diagonalize(const SparseOperator& op, const DiagOptions& options) {
  if (!op.hermitian_flag() && !op.is_numerically_hermitian())
    throw DomainError("diagonalize requires a hermitian operator");
  const ConstrainedBasis& basis = op.basis();

  struct Task {
    std::size_t begin, end;
    int label;
  };
  std::vector<Task> tasks;
  if (options.sector) {
    const int f = *options.sector;
    if (f < 0 || f > basis.max_fermions())
      throw DomainError("fermion sector out of range [0, n_sites/2]");
    if (!op.is_sector_block_diagonal())
      throw DomainError("sector-restricted diagonalization requires a block-diagonal operator");
    auto [b, e] = basis.sector_range(f);
    tasks.push_back({b, e, f});
  } else if (op.is_sector_block_diagonal()) {
    for (int f = 0; f <= basis.max_fermions(); ++f) {
      auto [b, e] = basis.sector_range(f);
      if (e > b) tasks.push_back({b, e, f});
    }
  } else {
    tasks.push_back({0, basis.dim(), -1});
  }

  std::size_t total_pairs = 0;
  Spectrum out;
  out.basis = &basis;
  out.complete = true;
  for (const Task& t : tasks) {
    const std::size_t n = t.end - t.begin;
    total_pairs += (n <= options.dense_threshold)
                       ? n
                       : static_cast<std::size_t>(options.iterative_pairs);
  }
  out.eigenvalues.reserve(total_pairs);
  out.sector_labels.reserve(total_pairs);
  out.eigenvectors = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.dim()),
                                            static_cast<Eigen::Index>(total_pairs));

  for (const Task& t : tasks) {
    const std::size_t n = t.end - t.begin;
    BlockEigen block;
    if (n <= options.dense_threshold) {
      block = dense_eigen(op.dense_block(t.begin, t.end));
    } else {
      SparseMatrix sub = op.matrix().block(
          static_cast<Eigen::Index>(t.begin), static_cast<Eigen::Index>(t.begin),
          static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      block = lanczos_extremal([&sub](const Vector& x) { return Vector(sub * x); }, n,
                               options);
      out.complete = false;
    }
    append_block(out, block, t.begin, t.label);
  }

  out.residual_norms.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vector residual = op.apply(out.eigenvectors.col(static_cast<Eigen::Index>(k))) -
                            out.eigenvalues[k] * out.eigenvectors.col(static_cast<Eigen::Index>(k));
    out.residual_norms[k] = residual.norm();
    const double bound = options.residual_tol * std::max(1.0, std::abs(out.eigenvalues[k]));
    if (out.residual_norms[k] > bound) {
      if (out.complete)
        throw ConsistencyError("dense eigenpair exceeds the residual bound");
      throw ConvergenceError("iterative eigenpair exceeds the residual bound",
                             out.residual_norms[k]);
    }
  }
  return out;
}

namespace {

struct Cluster {
  int sector = 0;
  double energy = 0.0;
  std::vector<std::size_t> ids;  // first n_lower are kernel vectors of Q
  int n_lower = 0;
};

}  // namespace

SusyClassification classify_susy(const Spectrum& spectrum, const SparseOperator& q,
                                 double tol) {
  if (!spectrum.basis) throw DomainError("spectrum has no attached basis");
  if (!spectrum.complete || spectrum.size() != spectrum.basis->dim())
    throw DomainError("classification requires the complete spectrum of the full basis");
  for (int label : spectrum.sector_labels)
    if (label < 0)
      throw DomainError("classification requires a sector-resolved spectrum");
  for (double e : spectrum.eigenvalues)
    if (e < -tol)
      throw DomainError("classification requires a positive semi-definite spectrum");

  SusyClassification out;
  out.vectors = spectrum.eigenvectors;
  const SparseOperator qd = q.adjoint();

  // Cluster by (sector, energy); inside a sector eigenvalues are ascending.
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double e = spectrum.eigenvalues[i];
    if (e <= tol) {
      out.singlet_ids.push_back(i);
      continue;
    }
    if (!clusters.empty() && clusters.back().sector == spectrum.sector_labels[i] &&
        e - clusters.back().energy <= tol) {
      clusters.back().ids.push_back(i);
    } else {
      clusters.push_back({spectrum.sector_labels[i], e, {i}, 0});
    }
  }

  for (std::size_t id : out.singlet_ids) {
    const auto col = static_cast<Eigen::Index>(id);
    if (q.apply(out.vectors.col(col)).norm() > tol ||
        qd.apply(out.vectors.col(col)).norm() > tol)
      throw ConsistencyError("zero mode is not annihilated by both supercharges");
  }

  // Rotate each degenerate subspace so every column is either a kernel vector
  // of Q (pairs upward) or an image vector of Qdag (pairs downward).
  for (Cluster& c : clusters) {
    const int m = static_cast<int>(c.ids.size());
    Eigen::MatrixXcd qv(out.vectors.rows(), m);
    for (int k = 0; k < m; ++k)
      qv.col(k) = q.apply(out.vectors.col(static_cast<Eigen::Index>(c.ids[k])));
    if (m > 1) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(qv.adjoint() * qv);
      Eigen::MatrixXcd rotated(out.vectors.rows(), m);
      for (int k = 0; k < m; ++k)
        rotated.col(k) = out.vectors.col(static_cast<Eigen::Index>(c.ids[k]));
      rotated = rotated * gram.eigenvectors();
      qv = qv * gram.eigenvectors();
      for (int k = 0; k < m; ++k)
        out.vectors.col(static_cast<Eigen::Index>(c.ids[k])) = rotated.col(k);
    }
    for (int k = 0; k < m; ++k) {
      const double knorm2 = qv.col(k).squaredNorm();
      if (knorm2 < 0.25 * c.energy) {
        if (knorm2 > c.energy * std::max(tol, 1e-18))
          throw ConsistencyError("degenerate subspace does not split under the supercharge");
        ++c.n_lower;
      } else if (std::abs(knorm2 - c.energy) > 0.25 * c.energy) {
        throw ConsistencyError("supercharge image norm is neither zero nor the full energy");
      }
    }
    // Lanczos-style ascending Gram eigenvalues put kernel vectors first.
    // The Gram step resolves the kernel only to sqrt(machine) inside mixed
    // levels; one pass of the in-level projector Q Qd / E scrubs the
    // leftover image admixture.
    for (int k = 0; k < c.n_lower; ++k) {
      const auto col = static_cast<Eigen::Index>(c.ids[static_cast<std::size_t>(k)]);
      Vector polished = q.apply(qd.apply(out.vectors.col(col))) / c.energy;
      const double pnorm = polished.norm();
      if (std::abs(pnorm - 1.0) > 0.25)
        throw ConsistencyError("kernel projector displaced a rotated vector");
      out.vectors.col(col) = polished / pnorm;
    }
  }

  // Pair kernel vectors with the sector above, greedily by overlap.
  std::vector<bool> claimed(spectrum.size(), false);
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    Cluster& c = clusters[ci];
    if (c.n_lower == 0) continue;
    Cluster* partner = nullptr;
    for (std::size_t cj = 0; cj < clusters.size(); ++cj) {
      if (clusters[cj].sector == c.sector + 1 &&
          std::abs(clusters[cj].energy - c.energy) <= tol) {
        partner = &clusters[cj];
        break;
      }
    }
    if (!partner)
      throw ConsistencyError("positive-energy level has no partner level in the sector above");

    for (int k = 0; k < c.n_lower; ++k) {
      const auto vid = static_cast<Eigen::Index>(c.ids[static_cast<std::size_t>(k)]);
      Vector u = qd.apply(out.vectors.col(vid));
      // Re-orthogonalize against partners already claimed in this level.
      for (const Doublet& d : out.doublets) {
        if (std::find(partner->ids.begin(), partner->ids.end(), d.upper_id) ==
            partner->ids.end())
          continue;
        const auto wcol = static_cast<Eigen::Index>(d.upper_id);
        u -= out.vectors.col(wcol) * out.vectors.col(wcol).dot(u);
      }
      const double unorm = u.norm();
      if (unorm <= tol)
        throw ConsistencyError("kernel vector has vanishing image under Qdag");
      u /= unorm;

      double best = -1.0;
      std::size_t best_id = 0;
      for (int j = partner->n_lower; j < static_cast<int>(partner->ids.size()); ++j) {
        const std::size_t wid = partner->ids[static_cast<std::size_t>(j)];
        if (claimed[wid]) continue;
        const double overlap =
            std::abs(out.vectors.col(static_cast<Eigen::Index>(wid)).dot(u));
        if (overlap > best) {
          best = overlap;
          best_id = wid;
        }
      }
      if (best < 0.0)
        throw ConsistencyError("no unclaimed partner remains in the sector above");
      claimed[best_id] = true;
      out.vectors.col(static_cast<Eigen::Index>(best_id)) = u;
      out.doublets.push_back({static_cast<std::size_t>(vid), best_id, c.energy});
    }
  }

  // Every positive-energy eigenpair must sit in exactly one doublet.
  std::vector<bool> used(spectrum.size(), false);
  for (std::size_t id : out.singlet_ids) used[id] = true;
  for (const Doublet& d : out.doublets) {
    if (used[d.lower_id] || used[d.upper_id])
      throw ConsistencyError("eigenpair assigned to more than one doublet");
    used[d.lower_id] = used[d.upper_id] = true;
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    if (!used[i])
      throw ConsistencyError("positive-energy eigenpair left unpaired");
  return out;
}

std::map<int, std::vector<IntegerLine>> integer_eigenvalue_table(const Spectrum& spectrum,
                                                                 double tol) {
  for (int label : spectrum.sector_labels)
    if (label < 0)
      throw DomainError("integer table requires a sector-resolved spectrum");
  std::map<int, std::map<long long, IntegerLine>> grouped;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double e = spectrum.eigenvalues[i];
    const long long nearest = std::llround(e);
    const double dist = std::abs(e - static_cast<double>(nearest));
    if (dist > tol) continue;
    IntegerLine& line = grouped[spectrum.sector_labels[i]][nearest];
    line.value = nearest;
    ++line.multiplicity;
    line.max_distance = std::max(line.max_distance, dist);
  }
  std::map<int, std::vector<IntegerLine>> out;
  for (auto& [sector, lines] : grouped) {
    auto& rows = out[sector];
    rows.reserve(lines.size());
    for (auto& [value, line] : lines) rows.push_back(line);
  }
  return out;
}

DoubletHamiltonian doublet_hamiltonian(const DoubletBlock& block) {
  if (block.energy < 0.0) throw DomainError("doublet energy must be non-negative");
  const double root = std::sqrt(block.energy);
  DoubletHamiltonian out;
  out.matrix << Complex(block.mu * block.fermion_number, 0.0), Complex(root, 0.0),
      Complex(root, 0.0), Complex(block.mu * (block.fermion_number - 1), 0.0);
  const double mid = block.mu * (2.0 * block.fermion_number - 1.0) / 2.0;
  const double half_gap = std::sqrt(block.energy + block.mu * block.mu / 4.0);
  out.eigenvalues = {mid - half_gap, mid + half_gap};
  return out;
}

namespace {

void collect_open_masks(int length, int next_bit, std::uint32_t acc,
                        std::vector<std::uint32_t>& out) {
  out.push_back(acc);
  for (int b = next_bit; b < length; ++b)
    collect_open_masks(length, b + 2, acc | (1u << b), out);
}

// All bit patterns of `length` bits with no two adjacent bits set (open
// chain), with a position lookup.
std::pair<std::vector<std::uint32_t>, std::unordered_map<std::uint32_t, int>>
open_chain_masks(int length) {
  std::vector<std::uint32_t> masks;
  collect_open_masks(length, 0, 0u, masks);
  std::unordered_map<std::uint32_t, int> lookup;
  lookup.reserve(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i)
    lookup.emplace(masks[i], static_cast<int>(i));
  return {std::move(masks), std::move(lookup)};
}

}  // namespace

std::vector<double> schmidt_values(const Vector& v, const ConstrainedBasis& basis,
                                   const Cut& cut) {
  if (v.size() != static_cast<Eigen::Index>(basis.dim()))
    throw DomainError("vector dimension does not match basis");
  if (std::abs(v.norm() - 1.0) > 1e-8)
    throw DomainError("entanglement cuts require a normalized state");
  const int n = basis.n_sites();
  if (cut.size < 1 || cut.size >= n)
    throw DomainError("cut size must satisfy 1 <= size <= n_sites - 1");
  if (cut.first_site < 1 || cut.first_site > n)
    throw DomainError("cut first_site out of range [1, n_sites]");

  // Rotate the region to sites [1, size]; the prefix of the ordered creation
  // string factorizes with no extra fermionic sign.
  const Vector w = (cut.first_site == 1)
                       ? v
                       : translate_statevector(basis, v, 1 - cut.first_site);

  const int la = cut.size;
  const auto [amasks, alookup] = open_chain_masks(la);
  const auto [bmasks, blookup] = open_chain_masks(n - la);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(amasks.size()),
                                              static_cast<Eigen::Index>(bmasks.size()));
  const std::uint32_t amask = (la == 32) ? 0xffffffffu : ((1u << la) - 1u);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::uint32_t bits = basis.state_bits(i);
    const int row = alookup.at(bits & amask);
    const int col = blookup.at(bits >> la);
    m(row, col) = w[static_cast<Eigen::Index>(i)];
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

double entanglement_entropy(const Vector& v, const ConstrainedBasis& basis,
                            const Cut& cut) {
  const std::vector<double> sv = schmidt_values(v, basis, cut);
  double h = 0.0;
  for (double s : sv) {
    const double p = s * s;
    if (p > 1e-300) h -= p * std::log(p);
  }
  return h;
}

}  // namespace m1sim
