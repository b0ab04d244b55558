#include <exception>
#include <iostream>

#include "CLI11.hpp"

#include "common.hpp"

#include "m1sim/errors.hpp"

namespace {

void add_output_flags(CLI::App* cmd, m1tool::RunConfig& config,
                      const std::vector<std::string>& formats) {
  cmd->add_option("--out", config.out, "write the report to this file instead of stdout");
  cmd->add_option("--format", config.format, "output format")
      ->check(CLI::IsMember(formats));
  cmd->add_option("--tol", config.tol, "tolerance for the command's checks")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator for the supersymmetric M1 chain and its PXP-like deformation"};
  app.require_subcommand(1);
  m1tool::RunConfig config;

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "diagonalize and report per-sector eigenvalues and SUSY structure");
  spectrum->add_option("--n", config.n, "number of sites")->required();
  spectrum->add_option("--model", config.model, "Hamiltonian")
      ->check(CLI::IsMember({"m1", "pxp"}));
  spectrum->add_option("--mu", config.mu, "fermion-number coupling (pxp model)");
  spectrum->add_option("--sector", config.sector, "restrict to one fermion-number sector");
  add_output_flags(spectrum, config, {"text", "json"});

  CLI::App* table = app.add_subcommand(
      "table-integers", "census of integer eigenvalues per sector with distance audit");
  table->add_option("--n", config.n, "number of sites")->required();
  add_output_flags(table, config, {"text", "json"});

  CLI::App* quench = app.add_subcommand(
      "quench", "fidelity and fermion-number series after a quench");
  quench->add_option("--n", config.n, "number of sites")->required();
  quench->add_option("--model", config.model, "Hamiltonian")
      ->check(CLI::IsMember({"m1", "pxp"}));
  quench->add_option("--mu", config.mu, "fermion-number coupling");
  quench->add_option("--init", config.init,
                     "initial state: z2, single, index:<k>, or file:<path>");
  quench->add_option("--tmax", config.tmax, "end of the time grid")
      ->check(CLI::PositiveNumber);
  quench->add_option("--samples", config.samples, "number of grid points (>= 2)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  quench->add_flag("--analytic", config.analytic,
                   "add closed-form overlay columns for z2 or single init");
  add_output_flags(quench, config, {"csv", "json", "text"});

  CLI::App* bethe = app.add_subcommand(
      "bethe-verify", "verify Bethe parameter sets: residuals, energy, eigenvector");
  bethe->add_option("--n", config.n, "number of sites");
  bethe->add_option("--family", config.family, "constructed family")
      ->check(CLI::IsMember({"single", "special", "dressed"}));
  bethe->add_option("--f", config.f, "fermion number (special family)");
  bethe->add_option("--branch", config.branch, "special-solution branch")
      ->check(CLI::IsMember({"plus", "minus"}));
  bethe->add_option("--n-plus", config.n_plus, "modes appended on the plus branch");
  bethe->add_option("--n-minus", config.n_minus, "modes appended on the minus branch");
  bethe->add_option("--mode-index", config.mode_index,
                    "plane-wave index of the dressed-family base");
  bethe->add_option("--solution", config.solution, "verify a solution JSON file");
  add_output_flags(bethe, config, {"text", "json"});

  CLI::App* mps = app.add_subcommand(
      "mps-check", "matrix-product form of a special eigenstate: overlap, entropy, rank");
  mps->add_option("--n", config.n, "number of sites")->required();
  mps->add_option("--f", config.f, "fermion number")->required();
  mps->add_option("--branch", config.branch, "special-solution branch")
      ->check(CLI::IsMember({"plus", "minus"}));
  add_output_flags(mps, config, {"text", "json"});

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(spectrum)) {
      config.command = "spectrum";
      return m1tool::cmd_spectrum(config);
    }
    if (app.got_subcommand(table)) {
      config.command = "table-integers";
      return m1tool::cmd_table_integers(config);
    }
    if (app.got_subcommand(quench)) {
      config.command = "quench";
      // quenches probe the deformed model unless the caller says otherwise
      if (quench->count("--model") == 0) config.model = "pxp";
      return m1tool::cmd_quench(config);
    }
    if (app.got_subcommand(bethe)) {
      config.command = "bethe-verify";
      return m1tool::cmd_bethe_verify(config);
    }
    if (app.got_subcommand(mps)) {
      config.command = "mps-check";
      return m1tool::cmd_mps_check(config);
    }
  } catch (const m1sim::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
