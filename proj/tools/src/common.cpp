#include "common.hpp"

#include <ctime>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "m1sim/io.hpp"

namespace m1tool {

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["command"] = config.command;
  doc["n"] = config.n;
  doc["mu"] = config.mu;
  doc["model"] = config.model;
  doc["init"] = config.init;
  doc["tmax"] = config.tmax;
  doc["samples"] = config.samples;
  if (config.sector)
    doc["sector"] = *config.sector;
  else
    doc["sector"] = nullptr;
  doc["tol"] = config.tol;
  doc["format"] = config.format;
  doc["analytic"] = config.analytic;
  doc["family"] = config.family;
  doc["f"] = config.f;
  doc["branch"] = config.branch;
  doc["n_plus"] = config.n_plus;
  doc["n_minus"] = config.n_minus;
  doc["mode_index"] = config.mode_index;
  doc["solution"] = config.solution;
  return doc;
}

nlohmann::ordered_json json_envelope(const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["command"] = config.command;
  doc["version"] = m1sim::kLibraryVersion;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  doc["timestamp"] = stamp;
  doc["config"] = config_to_json(config);
  return doc;
}

void emit(const RunConfig& config, const std::string& body) {
  if (config.out.empty()) {
    std::cout << body;
    if (body.empty() || body.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(config.out);
  if (!file) throw std::runtime_error("cannot open output file: " + config.out);
  file << body;
  if (body.empty() || body.back() != '\n') file << '\n';
}

}  // namespace m1tool
