#include <cmath>
#include <fstream>
#include <sstream>

#include "common.hpp"

#include "m1sim/basis.hpp"
#include "m1sim/dynamics.hpp"
#include "m1sim/errors.hpp"
#include "m1sim/io.hpp"
#include "m1sim/operators.hpp"

namespace m1tool {

namespace {

m1sim::Vector initial_state(const m1sim::ConstrainedBasis& basis,
                            const std::string& init) {
  using namespace m1sim;
  if (init == "z2") return z2_state(basis);
  if (init == "single") return single_site_state(basis, 1);
  if (init.rfind("index:", 0) == 0) {
    std::size_t k = std::stoull(init.substr(6));
    if (k >= basis.dim())
      throw DomainError("basis index " + std::to_string(k) + " out of range (dim " +
                        std::to_string(basis.dim()) + ")");
    Vector v = Vector::Zero(basis.dim());
    v[k] = 1.0;
    return v;
  }
  if (init.rfind("file:", 0) == 0) {
    std::ifstream in(init.substr(5));
    if (!in) throw DomainError("cannot open statevector file: " + init.substr(5));
    Vector v = read_statevector(in);
    if (static_cast<std::size_t>(v.size()) != basis.dim())
      throw DomainError("statevector dimension " + std::to_string(v.size()) +
                        " does not match basis dimension " + std::to_string(basis.dim()));
    return v;
  }
  throw DomainError("unknown --init value: " + init +
                    " (expected z2, single, index:<k>, or file:<path>)");
}

// Fidelity of a doublet member under H_PXP: two-level Rabi oscillation with
// splitting sqrt(4E + mu^2); the Z2 state has E = N/2.
double z2_rabi(int n, double mu, double t) {
  double four_e = 2.0 * n;
  double omega = std::sqrt(four_e + mu * mu);
  double s = std::sin(0.5 * omega * t);
  return 1.0 - (four_e / (four_e + mu * mu)) * s * s;
}

}  // namespace

int cmd_quench(const RunConfig& config) {
  using namespace m1sim;
  ConstrainedBasis basis(config.n);
  SparseOperator h = config.model == "m1" ? build_m1(basis) : build_pxp(basis, {config.mu});
  SparseOperator f_op = build_fermion_number(basis);
  Vector psi0 = initial_state(basis, config.init);
  std::vector<double> times = uniform_times(config.tmax, config.samples);

  EvolveOptions evolve_options;
  evolve_options.krylov_step_tol = std::min(config.tol, 1e-10);

  QuenchResult result = fidelity_series(h, psi0, times, {{"fermion_number", &f_op}},
                                        evolve_options);

  if (config.analytic) {
    if (config.init == "z2") {
      std::vector<double> overlay(times.size());
      for (std::size_t i = 0; i < times.size(); ++i)
        overlay[i] = z2_rabi(config.n, config.mu, times[i]);
      result.observables["analytic_z2"] = std::move(overlay);
    } else if (config.init == "single") {
      if (config.mu != 0.0)
        throw DomainError("analytic overlay for a single-fermion quench requires mu = 0");
      std::vector<double> exact(times.size()), bessel(times.size());
      for (std::size_t i = 0; i < times.size(); ++i) {
        exact[i] = single_fermion_fidelity_exact(config.n, times[i]);
        bessel[i] = single_fermion_fidelity_bessel(config.n, times[i]);
      }
      result.observables["analytic_exact"] = std::move(exact);
      result.observables["analytic_bessel"] = std::move(bessel);
    } else {
      throw DomainError("--analytic applies to --init z2 or --init single");
    }
  }

  QuenchMetadata meta{config.n, config.mu,
                      result.method == PropagationMethod::krylov
                          ? evolve_options.krylov_step_tol
                          : 0.0};

  if (config.format == "json") {
    auto doc = json_envelope(config);
    doc["quench"] = nlohmann::ordered_json::parse(quench_to_json(result, meta));
    emit(config, doc.dump(2));
    return 0;
  }
  std::ostringstream out;
  write_quench_csv(out, result);
  if (config.format == "csv") {
    emit(config, out.str());
    return 0;
  }
  // text: same columns, space separated
  std::string body = out.str();
  for (char& c : body)
    if (c == ',') c = ' ';
  emit(config, body);
  return 0;
}

}  // namespace m1tool
