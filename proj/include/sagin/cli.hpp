#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sagin::cli {

/// Entry point for the `sagin` tool: run | serve | eval | sweep | oracle.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SweepSpec {
    std::vector<int> users;
    std::vector<std::string> scheduling;
    std::vector<std::string> tags;
};

/// Parses "users=1:10;sched=fifo,ldf;tag=M4". Missing keys stay empty.
/// Throws std::invalid_argument on malformed specs.
SweepSpec parse_sweep_spec(const std::string& spec);

/// Reads an action file: either a CSV with an `action` column (and an
/// optional `episode` column), or whitespace-separated integers forming one
/// episode. Returns actions grouped by episode index, in episode order.
std::vector<std::pair<int, std::vector<int>>> read_action_file(const std::string& path);

}  // namespace sagin::cli
