#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toric::cli {

/// Runs one toric-sampler invocation; args exclude the program name.
/// Returns the exit code: 0 ok, 1 internal or verification failure,
/// 2 bad model or usage, 3 infeasible input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toric::cli
