#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace m1tool {

// One flat bag for every subcommand; unused fields keep their defaults so a
// config always serializes the same way.
struct RunConfig {
  std::string command;
  int n = 0;
  double mu = 0.0;
  std::string model = "m1";
  std::string init = "z2";
  double tmax = 10.0;
  std::size_t samples = 501;
  std::optional<int> sector;
  double tol = 1e-8;
  std::string out;
  std::string format = "text";
  bool analytic = false;
  std::string family;
  int f = 0;
  std::string branch = "plus";
  int n_plus = 0;
  int n_minus = 0;
  int mode_index = 0;
  std::string solution;
};

nlohmann::ordered_json config_to_json(const RunConfig& config);

// Envelope every JSON document shares: command, library version, UTC
// timestamp, full config, then the payload keys.
nlohmann::ordered_json json_envelope(const RunConfig& config);

// Writes to config.out when set, else stdout. Appends a trailing newline to
// JSON documents.
void emit(const RunConfig& config, const std::string& body);

int cmd_spectrum(const RunConfig& config);
int cmd_table_integers(const RunConfig& config);
int cmd_quench(const RunConfig& config);
int cmd_bethe_verify(const RunConfig& config);
int cmd_mps_check(const RunConfig& config);

}  // namespace m1tool
