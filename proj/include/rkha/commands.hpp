#pragma once

// Subcommands of rkha-cli. Each takes a parsed config plus flag overrides and
// writes its report (JSON) or sweep (CSV) to a stream.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace rkha::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> window;
  std::optional<double> trunc_eps;
};

/// Thrown for malformed or inconsistent configs (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void cmd_weight_report(const nlohmann::json& config, const Overrides& o, std::ostream& out);
void cmd_algebra(const nlohmann::json& config, const Overrides& o, std::ostream& out);
void cmd_kernel(const nlohmann::json& config, const Overrides& o, std::ostream& out);
void cmd_markov(const nlohmann::json& config, const Overrides& o, std::ostream& out);
void cmd_mmd(const nlohmann::json& config, const Overrides& o, std::ostream& out);
void cmd_spectrum(const nlohmann::json& config, const Overrides& o, std::ostream& out);

/// Full driver: args exclude the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rkha::cli
