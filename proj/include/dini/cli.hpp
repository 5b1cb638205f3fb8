#pragma once

#include <string>
#include <vector>

#include "dini/io.hpp"

namespace dini {

// Subcommands exposed by the dini_lab runner.
const std::vector<std::string>& command_names();

struct CommandOutput {
  json report;  // {case, command, config, constants, pass, witnesses}
  std::vector<std::pair<std::string, std::string>> files;  // (file name, contents)
};

// Runs one subcommand on an effective config.  Throws DomainError for config
// problems and NumericError for numerical failures.
CommandOutput run_command(const std::string& command, const json& config);

// Accepts a plain config or a previously emitted report (uses its "config").
json unwrap_config(const json& j);

// Fixed-format number for CSV output.
std::string fmt_num(double v);

}  // namespace dini
