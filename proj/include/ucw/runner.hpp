#ifndef UCW_RUNNER_HPP
#define UCW_RUNNER_HPP

#include "ucw/config.hpp"

#include <string>
#include <vector>

namespace ucw::runner {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct RunResult {
    // 0 all checks pass, 1 a declared check failed, 2 config error,
    // 3 numerical failure.
    int exit_code = 0;
    std::vector<CheckResult> checks;
    std::vector<std::string> outputs; // paths relative to the output directory
    std::string error;
};

/// Executes a validated config: dispatches to the owning module, writes the
/// CSV/NDJSON results and a manifest into the output directory. out_dir
/// overrides the config's [run] out when non-empty; threads > 0 overrides
/// [run] threads.
RunResult run(const config::ExperimentConfig& cfg, const std::string& out_dir = "",
              int threads = 0);

} // namespace ucw::runner

#endif
