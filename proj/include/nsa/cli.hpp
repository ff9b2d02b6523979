#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nsa::cli {

/// Outcome of one command. invalid_input and unsupported are both reported
/// as "error"; they differ only in the exit code.
enum class Status { verified, refuted, computed, invalid_input, unsupported };

std::string_view to_string(Status status);

/// 0 for verified/computed, 1 refuted, 2 invalid input, 3 unsupported.
int exit_code(Status status);

struct CommandResult {
  Status status = Status::computed;
  std::string output;       // stdout: plain text, or one JSON document with --json
  std::string diagnostics;  // stderr: warnings and error messages
};

/// Runs one command line (without the program name).
CommandResult run(const std::vector<std::string>& args);

}  // namespace nsa::cli
