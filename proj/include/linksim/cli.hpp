#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace linksim {

struct CliInvocation {
  std::string subcommand;  // run | paper-repro | validate-config
  std::string config_path;
  std::string output_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point behind the `linksim` binary. args excludes the program name.
/// Diagnostics go to `err`; `out` receives only the end-of-run summary.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linksim
