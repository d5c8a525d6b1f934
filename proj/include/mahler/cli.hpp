#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace mahler::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kValidation = 3, kPrecision = 4 };

struct CommandResult {
  std::string command;
  std::vector<std::string> args;
  std::string inputs_digest;
  nlohmann::json outputs = nlohmann::json::object();
  std::string status = "ok";
  std::string message;
  int exit_code = kOk;
  bool json = false;  // --json was given

  nlohmann::json to_json() const;
};

/// Runs one subcommand; `args` excludes the program name.
CommandResult run(const std::vector<std::string>& args);

std::string render_json(const CommandResult& r);
std::string render_text(const CommandResult& r);

}  // namespace mahler::cli
