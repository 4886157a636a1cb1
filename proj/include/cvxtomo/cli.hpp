#pragma once

// Batch driver: JSON configs in, JSON (and optional CSV) reports out.
//
// Exit status: 0 when every check passes, 1 when a check fails or a
// precondition of the computation does not hold, 2 on unusable input
// (unparseable JSON, missing fields, missing seed, bad values).

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cvxtomo::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

// Unusable input; maps to exit status 2.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;  // value <= tol
};

inline Check make_check(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol};
}

struct ScenarioResult {
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  unsigned threads = 1;
};

// Names accepted as "command" in configs and as subcommands.
const std::vector<std::string>& commands();

// Runs one command on a config object. Throws ConfigError on unusable input.
ScenarioResult run_scenario(const std::string& command, const nlohmann::json& config, const RunOptions& options);

// Report object; wall_time_s is the only field that varies between runs.
nlohmann::json make_report(const std::string& scenario, const std::string& command, const nlohmann::json& inputs,
                           const ScenarioResult& result, std::optional<std::uint64_t> seed, double wall_time_s);

std::string csv_text(const ScenarioResult& result);

// Writes via a temporary file in the same directory and a rename.
void write_atomically(const std::string& path, const std::string& content);

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cvxtomo::cli
