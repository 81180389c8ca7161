#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fchi::cli {

enum ExitCode { kOk = 0, kInputError = 2, kDivergence = 3, kOverflow = 4 };

/// Runs one invocation; args excludes the program name. Output goes to out,
/// diagnostics to err. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits a generator list on commas, keeping the coefficients of a
/// `poly:` entry together: "kl,poly:1,-2,1,js" -> {kl, poly:1,-2,1, js}.
std::vector<std::string> split_generator_list(const std::string& text);

}  // namespace fchi::cli
