#include <algorithm>
#include <map>
#include <sstream>

#include "common.hpp"

#include "m1sim/basis.hpp"
#include "m1sim/io.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

namespace m1tool {

namespace {

struct SectorSummary {
  std::size_t states = 0;
  double min_e = 0.0;
  double max_e = 0.0;
  double max_residual = 0.0;
  int zero_modes = 0;
};

}  // namespace

int cmd_spectrum(const RunConfig& config) {
  using namespace m1sim;
  ConstrainedBasis basis(config.n);
  const bool m1 = config.model == "m1";
  SparseOperator h = m1 ? build_m1(basis) : build_pxp(basis, {config.mu});

  DiagOptions options;
  options.sector = config.sector;
  Spectrum spectrum = diagonalize(h, options);

  std::map<int, SectorSummary> sectors;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    SectorSummary& s = sectors[spectrum.sector_labels[i]];
    double e = spectrum.eigenvalues[i];
    if (s.states == 0) {
      s.min_e = e;
      s.max_e = e;
    }
    s.states += 1;
    s.min_e = std::min(s.min_e, e);
    s.max_e = std::max(s.max_e, e);
    s.max_residual = std::max(s.max_residual, spectrum.residual_norms[i]);
    if (std::abs(e) <= 1e-10) s.zero_modes += 1;
  }

  // SUSY classification needs every sector present
  bool classified = false;
  std::size_t n_singlets = 0, n_doublets = 0;
  if (m1 && !config.sector) {
    SusyClassification cls = classify_susy(spectrum, build_supercharge(basis));
    n_singlets = cls.singlet_ids.size();
    n_doublets = cls.doublets.size();
    classified = true;
  }

  if (config.format == "json") {
    auto doc = json_envelope(config);
    doc["spectrum"] = nlohmann::ordered_json::parse(spectrum_to_json(spectrum));
    if (classified) {
      doc["susy"] = {{"singlets", n_singlets}, {"doublets", n_doublets}};
    }
    emit(config, doc.dump(2));
    return 0;
  }

  std::ostringstream out;
  out << "model " << config.model << ", N = " << config.n << ", dimension "
      << spectrum.size() << "\n";
  for (const auto& [f, s] : sectors) {
    out << "sector f=" << f << ": " << s.states << " states, range ["
        << s.min_e << ", " << s.max_e << "], max residual " << s.max_residual;
    if (s.zero_modes > 0) out << ", zero modes: " << s.zero_modes;
    out << "\n";
  }
  if (classified)
    out << "supersymmetry: " << n_singlets << " singlets, " << n_doublets
        << " doublets\n";
  if (!m1) {
    double asym = 0.0;
    std::size_t k = spectrum.size();
    for (std::size_t i = 0; i < k / 2; ++i)
      asym = std::max(asym,
                      std::abs(spectrum.eigenvalues[i] + spectrum.eigenvalues[k - 1 - i]));
    out << "spectral symmetry about zero: max |E_i + E_mirror| = " << asym << "\n";
  }
  emit(config, out.str());
  return 0;
}

}  // namespace m1tool
