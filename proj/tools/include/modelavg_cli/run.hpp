#pragma once

#include <iosfwd>

#include "modelavg_cli/config.hpp"

namespace modelavg::cli {

/// Runs one experiment and writes its outputs under config.output.
/// Returns 0 on success; on failure reports to `err`, removes anything it wrote and returns 1.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Full command line entry point: `modelavg <experiment> [--config FILE] [--key value]...`.
int main_entry(int argc, const char* const* argv);

} // namespace modelavg::cli
