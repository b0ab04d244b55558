#include "common.hpp"

#include "m1sim/basis.hpp"
#include "m1sim/io.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

namespace m1tool {

int cmd_table_integers(const RunConfig& config) {
  using namespace m1sim;
  ConstrainedBasis basis(config.n);
  Spectrum spectrum = diagonalize(build_m1(basis));
  auto table = integer_eigenvalue_table(spectrum, config.tol);

  if (config.format == "json") {
    auto doc = json_envelope(config);
    doc["table"] = nlohmann::ordered_json::parse(integer_table_json(table));
    emit(config, doc.dump(2));
    return 0;
  }
  emit(config, integer_table_text(table));
  return 0;
}

}  // namespace m1tool
