#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "plpot/errors.hpp"

namespace plpot::cli {

struct Invocation {
  std::string command;  // "body check", "phi", ...
  json config;          // effective config after overrides
  std::string out;      // empty: print to stdout
};

std::vector<std::string> command_names();

/// Runs one command; returns the exit status for non-exceptional outcomes
/// (0, or 3 when a report fails its own check). Library errors propagate.
int run_command(const Invocation& inv);

/// Maps library and config errors to the exit-code contract.
int exit_code_for(ErrorKind kind);

}  // namespace plpot::cli
