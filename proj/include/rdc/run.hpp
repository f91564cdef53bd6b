#pragma once

#include <string>
#include <vector>

#include "rdc/run_config.hpp"

namespace rdc {

// Outcome of one experiment run: the file stem (experiment plus config hash),
// the files written, and the results object embedded in the summary JSON.
struct RunOutcome {
    std::string stem;
    std::string summary_path;
    std::vector<std::string> artifacts; // figure/data files, summary excluded
    std::string results_json;           // results object as text
};

// Executes the experiment and writes its artifacts into config.out_dir:
// always a summary JSON echoing the resolved config, plus CSV tables or an
// SVG figure per config.format. Computation happens before any file is
// created, so a failed run leaves no partial output. Throws ValidationError
// on bad input, NumericalError when the experiment itself fails, and
// std::runtime_error on I/O failure.
RunOutcome run_experiment(const RunConfig& config);

// Full command-line entry: parses argv (subcommand, --config, --out,
// --format), runs the experiment, prints the summary path on success.
// Returns 0 on success, 2 on validation/usage errors (nothing written), 3 on
// numerical or I/O failure (diagnostics JSON written when possible). The
// RDC_LOG environment variable, when set and not "0", enables progress lines
// on stderr.
int cli_main(int argc, const char* const* argv);

} // namespace rdc
