#pragma once

#include <string>
#include <vector>

namespace vpd {

/// Runs the command-line tool in-process. `args` excludes the program name.
/// Returns the process exit code: 0 on success, 2 for configuration or
/// input errors, 3 when a run aborts on the cell-count cap.
int run_cli(const std::vector<std::string>& args);

}  // namespace vpd
