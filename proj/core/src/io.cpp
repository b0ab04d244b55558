#include "m1sim/io.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "m1sim/errors.hpp"

namespace m1sim {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal form that parses back to the same double; locale-free.
std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ordered_json complex_pair(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

}  // namespace

void write_sparse_triplet(std::ostream& out, const SparseOperator& op) {
  out << op.basis().n_sites() << ' ' << op.dim() << ' ' << op.nnz() << ' '
      << (op.hermitian_flag() ? 1 : 0) << '\n';
  const SparseMatrix& m = op.matrix();
  for (int row = 0; row < m.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(m, row); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << fmt(it.value().real()) << ' '
          << fmt(it.value().imag()) << '\n';
}

std::string spectrum_to_json(const Spectrum& spectrum) {
  ordered_json doc;
  doc["n_sites"] = spectrum.basis ? spectrum.basis->n_sites() : 0;
  doc["complete"] = spectrum.complete;
  std::map<int, ordered_json> sectors;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    int f = spectrum.sector_labels[i];
    if (!sectors.count(f)) {
      sectors[f] = ordered_json{{"f", f},
                                {"eigenvalues", ordered_json::array()},
                                {"residuals", ordered_json::array()}};
    }
    sectors[f]["eigenvalues"].push_back(spectrum.eigenvalues[i]);
    sectors[f]["residuals"].push_back(spectrum.residual_norms[i]);
  }
  doc["sectors"] = ordered_json::array();
  for (auto& [f, sec] : sectors) doc["sectors"].push_back(std::move(sec));
  return doc.dump(2);
}

std::string integer_table_text(const std::map<int, std::vector<IntegerLine>>& table) {
  std::ostringstream out;
  out << "  f  levels";
  out << std::string(46, ' ') << "max |E - n|\n";
  for (const auto& [f, lines] : table) {
    if (lines.empty()) continue;
    std::string levels;
    double worst = 0.0;
    for (const IntegerLine& line : lines) {
      if (!levels.empty()) levels += ", ";
      levels += std::to_string(line.value) + " (x" + std::to_string(line.multiplicity) + ")";
      worst = std::max(worst, line.max_distance);
    }
    char head[16];
    std::snprintf(head, sizeof head, "%3d  ", f);
    out << head << levels;
    int pad = 52 - static_cast<int>(levels.size());
    out << std::string(pad > 1 ? pad : 1, ' ');
    char audit[32];
    std::snprintf(audit, sizeof audit, "%.2e", worst);
    out << audit << '\n';
  }
  return out.str();
}

std::string integer_table_json(const std::map<int, std::vector<IntegerLine>>& table) {
  ordered_json doc;
  doc["sectors"] = ordered_json::array();
  for (const auto& [f, lines] : table) {
    if (lines.empty()) continue;
    ordered_json sec{{"f", f}, {"levels", ordered_json::array()}};
    for (const IntegerLine& line : lines)
      sec["levels"].push_back(ordered_json{{"value", line.value},
                                           {"multiplicity", line.multiplicity},
                                           {"max_distance", line.max_distance}});
    doc["sectors"].push_back(std::move(sec));
  }
  return doc.dump(2);
}

void write_quench_csv(std::ostream& out, const QuenchResult& result) {
  out << "t,fidelity";
  for (const auto& [name, series] : result.observables) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    out << fmt(result.times[i]) << ',' << fmt(result.fidelity[i]);
    for (const auto& [name, series] : result.observables) out << ',' << fmt(series[i]);
    out << '\n';
  }
}

std::string quench_to_json(const QuenchResult& result, const QuenchMetadata& meta) {
  ordered_json doc;
  doc["n_sites"] = meta.n_sites;
  doc["mu"] = meta.mu;
  doc["method"] = result.method == PropagationMethod::spectral ? "spectral" : "krylov";
  doc["tolerance"] = meta.tolerance;
  doc["times"] = result.times;
  doc["fidelity"] = result.fidelity;
  doc["observables"] = ordered_json::object();
  for (const auto& [name, series] : result.observables) doc["observables"][name] = series;
  return doc.dump(2);
}

std::string bethe_solution_to_json(const BetheSolution& solution) {
  ordered_json doc;
  doc["N"] = solution.n_sites;
  doc["f"] = solution.fermion_number;
  doc["mus"] = ordered_json::array();
  for (const Complex& mu : solution.mus) doc["mus"].push_back(complex_pair(mu));
  doc["energy"] = solution.energy;
  doc["momentum_phase"] = complex_pair(solution.momentum_phase);
  doc["residual"] = solution.residual_norm;
  return doc.dump(2);
}

BetheSolution bethe_solution_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  if (!doc.contains("N") || !doc.contains("mus"))
    throw DomainError("Bethe solution document needs at least \"N\" and \"mus\"");
  int n = doc.at("N").get<int>();
  std::vector<Complex> mus;
  for (const auto& pair : doc.at("mus")) {
    if (!pair.is_array() || pair.size() != 2)
      throw DomainError("each entry of \"mus\" must be a [re, im] pair");
    mus.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  if (doc.contains("f") && doc.at("f").get<int>() != static_cast<int>(mus.size()))
    throw DomainError("\"f\" disagrees with the number of entries in \"mus\"");
  return make_bethe_solution(std::move(mus), n);
}

void write_statevector(std::ostream& out, const Vector& v) {
  out << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << fmt(v[i].real()) << ' ' << fmt(v[i].imag()) << '\n';
}

Vector read_statevector(std::istream& in) {
  std::size_t dim = 0;
  if (!(in >> dim)) throw DomainError("statevector file: missing dimension header");
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im))
      throw DomainError("statevector file: truncated at amplitude " + std::to_string(i));
    v[i] = Complex(re, im);
  }
  return v;
}

}  // namespace m1sim
