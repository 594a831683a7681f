#pragma once
// The rwa-lab command-line front end. run_cli is the whole program minus
// process setup, so tests drive it in-process.
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rwa::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumeric = 3, kExitIo = 4 };

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `lo:hi:steps` (inclusive, evenly spaced) or a comma-separated list.
std::vector<double> parse_grid(std::string_view text);

// Comma-separated integers, each >= min_value.
std::vector<int> parse_int_list(std::string_view text, int min_value);

// Path of the manifest written next to an output file.
std::string manifest_path(const std::string& output);

}  // namespace rwa::cli
