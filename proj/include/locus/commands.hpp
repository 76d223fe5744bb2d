#pragma once

#include <iosfwd>
#include <string>

#include "locus/problem_io.hpp"

// Command drivers. Each one runs its analysis, prints a human-readable
// summary to `out`, and returns the machine-readable report body as a
// serialized JSON string (byte-stable for a fixed input file and seed).
// InputError from loading maps to exit 2, std::logic_error to exit 3.

namespace locus {

struct CommandResult {
  std::string machine_body;
  int exit_code = 0;
};

CommandResult cmd_partitions(const ProblemFile& input, std::ostream& out);
CommandResult cmd_recover(const ProblemFile& input, std::ostream& out);
CommandResult cmd_tps(const ProblemFile& input, std::ostream& out);
CommandResult cmd_classical(const ProblemFile& input, std::ostream& out);
CommandResult cmd_check(const ProblemFile& input, std::ostream& out);

// Dispatch by name; throws InputError on an unknown command.
CommandResult run_command(const std::string& name, const ProblemFile& input,
                          std::ostream& out);

}  // namespace locus
