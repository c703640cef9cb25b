#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace starsym {

/// Outcome of one executable identity check.
struct CheckResult {
  std::string name;
  std::string description;
  /// Measured quantity compared against `tolerance` (pass iff residual <= tolerance).
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  /// Equator resolution for n = 3 (other dimensions use their defaults).
  int resolution = 512;
  std::uint64_t seed = 7;
  std::optional<std::string> only;
  std::size_t oracle_samples = 1'000'000;
  int workers = 0;
};

/// Names accepted by VerifyOptions::only, in execution order.
const std::vector<std::string>& verify_check_names();

/// Runs the identity suite (all checks, or the one named in `only`; an
/// unknown name throws std::invalid_argument).
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace starsym
