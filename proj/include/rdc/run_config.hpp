#pragma once

#include <optional>
#include <string>

#include "rdc/nonlinearity.hpp"

namespace rdc {

// Resolved experiment configuration: one flat record shared by every
// subcommand. Fields irrelevant to a given experiment are simply unused but
// still echoed, so the summary JSON always shows the complete resolved state.
struct RunConfig {
    std::string experiment; // path, path-to-barrier, barrier, mu-star,
                            // simulate, omega, wave, staircase, quasistatic,
                            // min-time
    Nonlinearity nl = Nonlinearity::cubic_bistable(1.0 / 3.0);
    double mu = 1.0;
    int dimension = 2;
    double radius = 10.0; // interval runs may set "length" = 2 * radius
    int nr = 100;         // radial nodes for time-dependent experiments
    double dt = 0.01;
    double tol = 0.02;    // steady-path continuity tolerance
    double eps = 0.01;    // terminal tube radius
    double horizon = 10.0;
    double t_hi = 100.0;  // min-time initial upper horizon
    double dwell = 8.0;   // staircase hold time per waypoint
    double a = 0.0;       // constant boundary value (simulate, omega)
    double u0 = 0.0;      // constant initial value
    std::optional<double> target; // terminal target constant; defaults to
                                  // theta when the reaction has one, else 0.5
    double t_max = 1000.0;   // omega-limit classification horizon
    double omega_tol = 1e-8; // omega-limit residual tolerance
    std::optional<double> rate_cap;      // quasistatic slope bound
    std::optional<double> init_boundary; // min-time seed value
    std::string out_dir = ".";
    std::string format = "csv"; // csv | svg

    // Terminal target constant after defaulting.
    double target_value() const;

    // Full resolved state as a JSON object string with sorted keys; optional
    // fields appear as null, interval runs also echo "length". out_dir and
    // format are routing, not experiment identity, and are echoed here but
    // excluded from hash_name().
    std::string resolved_json() const;

    // "<experiment>-<16 hex digits>": FNV-1a of the resolved config minus
    // out_dir/format. Identical experiments map to identical file stems.
    std::string hash_name() const;
};

// Parses a config JSON object (empty text means all defaults) and overlays it
// on the defaults above. experiment comes from the subcommand; a config that
// also carries "experiment" must agree. Unknown keys, type mismatches, and
// out-of-range values throw ValidationError.
RunConfig parse_run_config(const std::string& json_text,
                           const std::string& experiment);

// Range and consistency checks (throws ValidationError). parse_run_config
// calls this; exposed for configs built in code.
void validate_run_config(const RunConfig& config);

} // namespace rdc
