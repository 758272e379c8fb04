#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opsim/matrix_json.hpp"

namespace opsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFail = 2;

/// Subcommands and the config keys each one accepts (also its flag names).
const std::vector<std::string>& subcommands();
const std::vector<std::string>& keys_for(const std::string& subcommand);

struct RunOutput {
  Json report;
  std::string csv;  // non-empty for table-producing subcommands
  int exit_code = kExitOk;
};

/// Runs one subcommand. Relative paths in `config` resolve against `base_dir`.
/// Throws InputError on malformed configuration.
RunOutput run_config(const std::string& subcommand, const Json& config,
                     const std::filesystem::path& base_dir);

/// Command-line entry point: `opsim <sub> --config file.json [--out r.json] [--key value ...]`.
int main(int argc, char** argv);

}  // namespace opsim::cli
