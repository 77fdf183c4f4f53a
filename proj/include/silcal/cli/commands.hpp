#pragma once

namespace silcal::cli {

/// Parse argv and dispatch to one of the subcommands (calibrate, synth,
/// eval-rcm, render, gradcheck). Exit codes: 0 success, 1 bad input or
/// usage, 2 computation failure.
int run_cli(int argc, const char* const* argv);

}  // namespace silcal::cli
