#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "openq/domain.hpp"
#include "openq/integrator.hpp"

namespace openq::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "openq-report/1";

enum ExitCode : int { ok = 0, config_error = 2, validation_error = 3, runtime_error = 4 };

int exit_code_for(ErrorCode code);

/// INI-style configuration, one section per module. Every key has a default;
/// keys outside the schema are rejected.
class Config {
 public:
  using Section = std::map<std::string, std::string>;

  /// All defaults.
  Config();

  static Config parse(std::istream& is);
  static Config load(const std::string& path);

  const std::string& get(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key) const;
  long integer(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);

  const std::map<std::string, Section>& sections() const { return sections_; }
  nlohmann::json to_json() const;

 private:
  std::map<std::string, Section> sections_;
};

/// Comma-separated reals; empty string gives an empty list.
std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& text);
/// Schedule: non-negative and strictly increasing.
std::vector<double> parse_schedule(const std::string& text);

PhysicalParams params_of(const Config& c);
Grid x_grid_of(const Config& c);
Grid xd_grid_of(const Config& c);
IntegratorConfig integrator_of(const Config& c);

struct Options {
  std::optional<std::string> out_dir;
  std::string format = "json";
  bool quiet = false;
  unsigned threads = 1;
  std::optional<double> lmax;
};

struct Outcome {
  int exit_code = ExitCode::ok;
  nlohmann::json report;
  /// Output files by name (written by the caller into --out).
  std::map<std::string, std::string> files;
  /// Name of the file printed on stdout in csv format.
  std::string primary_csv;
  std::string error;
};

/// Runs one pipeline. `command` is a subcommand name, or "run" to dispatch on
/// scenario.name. Never throws; failures are mapped onto exit codes.
Outcome execute(const std::string& command, const Config& config, const Options& opts);

/// Names accepted by execute().
const std::vector<std::string>& commands();

}  // namespace openq::cli
