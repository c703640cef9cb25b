#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace starsym {

enum class Command { analyze, sections, verify, harmonics };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

/// Fully resolved parameters of one CLI invocation. Every output artifact
/// embeds to_json(config).
struct RunConfig {
  Command command = Command::analyze;
  std::string body_spec;
  int dim = 3;
  /// Equator resolution; 0 means "default for dim" until resolved.
  int resolution = 0;
  int num_dirs = 200;
  std::uint64_t seed = 7;
  std::string sampler = "antipodal";
  double fd_step = 1e-2;
  std::string z_grid = "-0.9:0.9:0.05";
  std::vector<std::string> kinds = {"conical", "hyperplane"};
  /// Section direction; empty means the first coordinate axis.
  std::vector<double> xi;
  std::string output_dir = ".";
  std::vector<std::string> formats = {"csv"};
  std::optional<std::string> only;
  int lmax = 10;
  std::size_t oracle_samples = 1'000'000;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; wrong types throw SpecError.
RunConfig config_from_json(const nlohmann::json& j);

/// Replaces resolution 0 by default_resolution(dim).
RunConfig resolved(RunConfig config);

/// "a:b:step" (inclusive, step > 0) or a comma-separated list. Every value
/// must lie in (-1, 1); throws SpecError otherwise.
std::vector<double> parse_z_grid(std::string_view text);

}  // namespace starsym
