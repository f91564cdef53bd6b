#include "rdc/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdc/boundary_control.hpp"
#include "rdc/errors.hpp"
#include "rdc/figure_export.hpp"
#include "rdc/parabolic.hpp"
#include "rdc/radial_steady.hpp"
#include "rdc/traveling_wave.hpp"

namespace rdc {

namespace {

using nlohmann::json;

bool log_enabled() {
    const char* v = std::getenv("RDC_LOG");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
    if (log_enabled()) {
        std::cerr << "[rdc] " << msg << std::endl;
    }
}

// Everything an experiment produces, staged in memory so that files are only
// created once the computation has fully succeeded.
struct Staged {
    json results = json::object();
    std::vector<std::pair<std::string, DataTable>> tables; // stem suffix
    std::string x_label;
    std::string y_label;
    std::vector<Series> figure;
};

Grid make_grid(const RunConfig& c) {
    Grid g;
    g.dimension = c.dimension;
    g.radius = c.radius;
    g.nr = c.nr;
    g.dt = c.dt;
    g.mu = c.mu;
    return g;
}

int horizon_steps(double horizon, double dt, const char* what) {
    const int steps = static_cast<int>(std::lround(horizon / dt));
    if (steps < 1) {
        throw ValidationError(std::string(what) +
                              ": horizon shorter than one time step");
    }
    return steps;
}

std::vector<std::size_t> stride_indices(std::size_t n, std::size_t max_kept) {
    std::vector<std::size_t> idx;
    if (n == 0) {
        return idx;
    }
    if (max_kept < 2 || n <= max_kept) {
        for (std::size_t i = 0; i < n; ++i) {
            idx.push_back(i);
        }
        return idx;
    }
    for (std::size_t j = 0; j < max_kept; ++j) {
        idx.push_back(j * (n - 1) / (max_kept - 1));
    }
    return idx;
}

// Phase-plane figure: (u, v) curve per profile plus the dashed envelope
// v = +/- sqrt(-2 F(u) / mu) bounding the orbits of bistable terms with a
// nonnegative well at 1.
void stage_phase_figure(Staged& s, const Nonlinearity& nl, double mu,
                        const std::vector<const RadialProfile*>& profiles) {
    s.x_label = "u";
    s.y_label = "v";
    const auto keep = stride_indices(profiles.size(), 12);
    for (std::size_t k : keep) {
        Series line;
        line.x = decimate(profiles[k]->u, 401);
        line.y = decimate(profiles[k]->v, 401);
        s.figure.push_back(std::move(line));
    }
    const Classification cls = classify(nl);
    if (cls.theta1 && *cls.theta1 > 0.0) {
        Series upper_env, lower_env;
        upper_env.label = "envelope";
        upper_env.dashed = lower_env.dashed = true;
        const int n = 257;
        for (int i = 0; i < n; ++i) {
            const double u = *cls.theta1 * i / (n - 1);
            const double w = region_halfwidth(nl, u) / std::sqrt(mu);
            upper_env.x.push_back(u);
            upper_env.y.push_back(w);
            lower_env.x.push_back(u);
            lower_env.y.push_back(-w);
        }
        s.figure.push_back(std::move(upper_env));
        s.figure.push_back(std::move(lower_env));
    }
}

void stage_profile_table(Staged& s, const std::string& suffix,
                         const std::string& key_column,
                         const std::vector<const RadialProfile*>& profiles,
                         const std::vector<double>& keys) {
    DataTable t;
    t.columns = {key_column, "r", "u", "v"};
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const RadialProfile& p = *profiles[k];
        for (std::size_t i : stride_indices(p.r.size(), 201)) {
            t.rows.push_back({keys[k], p.r[i], p.u[i], p.v[i]});
        }
    }
    s.tables.emplace_back(suffix, std::move(t));
}

void stage_schedule_table(Staged& s, const ControlSchedule& schedule,
                          double dt) {
    DataTable t;
    t.columns = {"t", "a"};
    for (std::size_t k = 0; k < schedule.values.size(); ++k) {
        t.rows.push_back({static_cast<double>(k) * dt, schedule.values[k]});
    }
    s.tables.emplace_back("", std::move(t));
    s.x_label = "t";
    s.y_label = "a";
    Series line;
    for (const auto& row : s.tables.back().second.rows) {
        line.x.push_back(row[0]);
        line.y.push_back(row[1]);
    }
    s.figure.push_back(std::move(line));
}

Staged run_steady_path(const RunConfig& c) {
    const SteadyPath path =
        c.experiment == "path"
            ? build_path(c.nl, c.mu, c.dimension, c.radius, c.tol)
            : path_to_minimal_barrier(c.nl, c.mu, c.dimension, c.radius,
                                      c.tol);
    Staged s;
    DataTable t;
    t.columns = {"a", "trace"};
    std::vector<const RadialProfile*> refs;
    std::vector<double> keys;
    for (std::size_t k = 0; k < path.profiles.size(); ++k) {
        t.rows.push_back({path.profiles[k].center_value, path.trace[k]});
        refs.push_back(&path.profiles[k]);
        keys.push_back(path.profiles[k].center_value);
    }
    s.tables.emplace_back("", std::move(t));
    stage_profile_table(s, "-profiles", "a", refs, keys);
    stage_phase_figure(s, c.nl, c.mu, refs);
    s.results["profiles"] = path.profiles.size();
    s.results["continuity_bound"] = path.continuity_bound;
    s.results["trace_first"] = path.trace.front();
    s.results["trace_last"] = path.trace.back();
    return s;
}

Staged run_barrier(const RunConfig& c) {
    const std::vector<Barrier> barriers =
        find_barriers(c.nl, c.mu, c.dimension, c.radius);
    Staged s;
    DataTable t;
    t.columns = {"center", "is_minimal"};
    std::vector<const RadialProfile*> refs;
    std::vector<double> keys;
    json minimal_center = nullptr;
    for (const Barrier& b : barriers) {
        t.rows.push_back({b.center_value, b.is_minimal ? 1.0 : 0.0});
        refs.push_back(&b.profile);
        keys.push_back(b.center_value);
        if (b.is_minimal) {
            minimal_center = b.center_value;
        }
    }
    s.tables.emplace_back("", std::move(t));
    stage_profile_table(s, "-profiles", "center", refs, keys);
    stage_phase_figure(s, c.nl, c.mu, refs);
    s.results["count"] = barriers.size();
    s.results["minimal_center"] = minimal_center;
    return s;
}

Staged run_mu_star(const RunConfig& c) {
    const Domain domain = c.dimension == 1
                              ? Domain::interval(2.0 * c.radius)
                              : Domain::ball(c.dimension, c.radius);
    const double measure = c.dimension == 1
                               ? 2.0 * c.radius
                               : ball_measure(c.dimension, c.radius);
    const double lambda = lambda1(domain);
    const LowerBound lower = mu_star_lower_bound(c.nl, c.dimension, measure);
    const double upper = mu_star_upper_bound(c.nl, lambda);
    const double numeric = mu_star_numeric(c.nl, c.dimension, c.radius);
    Staged s;
    s.results["numeric"] = numeric;
    s.results["lower"] = lower.applicable ? json(lower.value) : json(nullptr);
    s.results["lower_applicable"] = lower.applicable;
    s.results["lower_delta"] = lower.delta;
    s.results["upper"] = upper;
    s.results["lambda1"] = lambda;
    s.results["measure"] = measure;
    return s;
}

Staged run_simulate(const RunConfig& c) {
    const Grid g = make_grid(c);
    const int steps = horizon_steps(c.horizon, c.dt, "simulate");
    const Trajectory trajectory = simulate(
        g, c.nl, constant_field(g, c.u0), ControlSchedule::constant(c.a, steps));
    Staged s;
    DataTable t;
    t.columns = {"t", "r", "u"};
    const auto time_idx = stride_indices(trajectory.states.size(), 121);
    const auto node_idx =
        stride_indices(static_cast<std::size_t>(g.nr) + 1, 101);
    for (std::size_t ti : time_idx) {
        for (std::size_t i : node_idx) {
            const double r = g.radius * static_cast<double>(i) / g.nr;
            t.rows.push_back({trajectory.times[ti], r, trajectory.states[ti][i]});
        }
    }
    s.tables.emplace_back("", std::move(t));
    s.x_label = "r";
    s.y_label = "u";
    Series initial, terminal;
    initial.label = "t = 0";
    initial.dashed = true;
    terminal.label = "terminal";
    for (int i = 0; i <= g.nr; ++i) {
        const double r = g.radius * static_cast<double>(i) / g.nr;
        initial.x.push_back(r);
        initial.y.push_back(trajectory.states.front()[i]);
        terminal.x.push_back(r);
        terminal.y.push_back(trajectory.terminal[i]);
    }
    s.figure.push_back(std::move(terminal));
    s.figure.push_back(std::move(initial));
    double lo = trajectory.min_per_step.front();
    double hi = trajectory.max_per_step.front();
    for (std::size_t k = 0; k < trajectory.min_per_step.size(); ++k) {
        lo = std::min(lo, trajectory.min_per_step[k]);
        hi = std::max(hi, trajectory.max_per_step[k]);
    }
    s.results["steps"] = steps;
    s.results["terminal_min"] =
        *std::min_element(trajectory.terminal.begin(), trajectory.terminal.end());
    s.results["terminal_max"] =
        *std::max_element(trajectory.terminal.begin(), trajectory.terminal.end());
    s.results["min_over_run"] = lo;
    s.results["max_over_run"] = hi;
    return s;
}

const char* omega_kind_name(OmegaClass kind) {
    switch (kind) {
        case OmegaClass::Zero: return "zero";
        case OmegaClass::Theta: return "theta";
        case OmegaClass::One: return "one";
        case OmegaClass::NontrivialSteady: return "nontrivial_steady";
        case OmegaClass::Undecided: return "undecided";
    }
    return "undecided";
}

Staged run_omega(const RunConfig& c) {
    const Grid g = make_grid(c);
    const OmegaResult result = omega_classify(
        g, c.nl, constant_field(g, c.u0), c.a, c.t_max, c.omega_tol);
    Staged s;
    DataTable t;
    t.columns = {"r", "u"};
    Series line;
    for (int i = 0; i <= g.nr; ++i) {
        const double r = g.radius * static_cast<double>(i) / g.nr;
        t.rows.push_back({r, result.limit[i]});
        line.x.push_back(r);
        line.y.push_back(result.limit[i]);
    }
    s.tables.emplace_back("", std::move(t));
    s.x_label = "r";
    s.y_label = "u";
    s.figure.push_back(std::move(line));
    s.results["kind"] = omega_kind_name(result.kind);
    s.results["residual"] = result.residual;
    s.results["time"] = result.time;
    return s;
}

Staged run_wave(const RunConfig& c) {
    const WaveSolution wave = wave_profile(c.nl, c.mu);
    Staged s;
    DataTable t;
    t.columns = {"xi", "U"};
    Series line;
    for (std::size_t i : stride_indices(wave.xi.size(), 2001)) {
        t.rows.push_back({wave.xi[i], wave.u[i]});
        line.x.push_back(wave.xi[i]);
        line.y.push_back(wave.u[i]);
    }
    s.tables.emplace_back("", std::move(t));
    s.x_label = "xi";
    s.y_label = "U";
    s.figure.push_back(std::move(line));
    s.results["speed"] = wave.speed;
    s.results["samples"] = wave.xi.size();
    return s;
}

Staged run_staircase(const RunConfig& c) {
    const SteadyPath path =
        build_path(c.nl, c.mu, c.dimension, c.radius, c.tol);
    const Grid g = make_grid(c);
    const StaircaseResult result = staircase_schedule(
        path, g, c.nl, constant_field(g, c.u0), c.dwell, c.eps);
    Staged s;
    stage_schedule_table(s, result.schedule, c.dt);
    s.results["terminal_error"] = result.terminal_error;
    s.results["steps"] = result.schedule.steps();
    s.results["waypoints"] = path.profiles.size();
    return s;
}

OptimizationProblem make_problem(const RunConfig& c, Objective objective) {
    OptimizationProblem problem;
    problem.grid = make_grid(c);
    problem.nl = c.nl;
    problem.u0 = constant_field(problem.grid, c.u0);
    problem.target = constant_field(problem.grid, c.target_value());
    problem.eps = c.eps;
    problem.rate_cap = c.rate_cap;
    problem.objective = objective;
    return problem;
}

Staged run_quasistatic(const RunConfig& c) {
    const OptimizationResult result = quasistatic_optimize(
        make_problem(c, Objective::ControlSmoothness), c.horizon);
    Staged s;
    stage_schedule_table(s, result.schedule, c.dt);
    s.results["objective_value"] = result.objective_value;
    s.results["terminal_error"] = result.terminal_error;
    s.results["iterations"] = result.iterations;
    s.results["converged"] = result.converged;
    return s;
}

Staged run_min_time(const RunConfig& c) {
    const MinTimeResult result = min_time_search(
        make_problem(c, Objective::TerminalMismatch), c.t_hi, c.init_boundary);
    Staged s;
    stage_schedule_table(s, result.best.schedule, c.dt);
    DataTable probes;
    probes.columns = {"T", "feasible", "terminal_error"};
    for (const MinTimeProbe& p : result.probes) {
        probes.rows.push_back(
            {p.horizon, p.feasible ? 1.0 : 0.0, p.terminal_error});
    }
    s.tables.emplace_back("-probes", std::move(probes));
    s.results["t_min"] = result.t_min;
    s.results["terminal_error"] = result.best.terminal_error;
    s.results["converged"] = result.best.converged;
    s.results["probes"] = result.probes.size();
    return s;
}

Staged dispatch(const RunConfig& c) {
    if (c.experiment == "path" || c.experiment == "path-to-barrier") {
        return run_steady_path(c);
    }
    if (c.experiment == "barrier") {
        return run_barrier(c);
    }
    if (c.experiment == "mu-star") {
        return run_mu_star(c);
    }
    if (c.experiment == "simulate") {
        return run_simulate(c);
    }
    if (c.experiment == "omega") {
        return run_omega(c);
    }
    if (c.experiment == "wave") {
        return run_wave(c);
    }
    if (c.experiment == "staircase") {
        return run_staircase(c);
    }
    if (c.experiment == "quasistatic") {
        return run_quasistatic(c);
    }
    if (c.experiment == "min-time") {
        return run_min_time(c);
    }
    throw ValidationError("config: unknown experiment \"" + c.experiment +
                          "\"");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << text << '\n';
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace

RunOutcome run_experiment(const RunConfig& config) {
    validate_run_config(config);
    log_line("running " + config.experiment);
    Staged staged = dispatch(config);
    log_line(config.experiment + " computed, writing artifacts");

    std::error_code dir_error;
    std::filesystem::create_directories(config.out_dir, dir_error);
    if (dir_error) {
        throw std::runtime_error("cannot create output directory " +
                                 config.out_dir + ": " + dir_error.message());
    }
    RunOutcome outcome;
    outcome.stem = config.hash_name();
    const std::string base =
        (std::filesystem::path(config.out_dir) / outcome.stem).string();
    if (config.format == "csv") {
        for (const auto& [suffix, table] : staged.tables) {
            const std::string path = base + suffix + ".csv";
            write_csv(path, table);
            outcome.artifacts.push_back(path);
        }
    } else if (!staged.figure.empty()) {
        const std::string path = base + ".svg";
        write_svg_plot(path, staged.x_label, staged.y_label, staged.figure);
        outcome.artifacts.push_back(path);
    }
    json summary;
    summary["experiment"] = config.experiment;
    summary["config"] = json::parse(config.resolved_json());
    summary["results"] = staged.results;
    json names = json::array();
    for (const std::string& path : outcome.artifacts) {
        names.push_back(std::filesystem::path(path).filename().string());
    }
    summary["artifacts"] = names;
    outcome.summary_path = base + ".json";
    write_text(outcome.summary_path, summary.dump(2));
    outcome.results_json = staged.results.dump(2);
    log_line("wrote " + outcome.summary_path);
    return outcome;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"boundary control toolkit for radial reaction-diffusion "
                 "problems"};
    app.require_subcommand(1);
    static const std::vector<std::pair<std::string, std::string>> kCommands = {
        {"path", "steady-state path from the empty state to the theta plateau"},
        {"path-to-barrier", "steady-state path ending at the minimal barrier"},
        {"barrier", "nontrivial steady states with zero boundary data"},
        {"mu-star", "threshold diffusivity bounds and numeric estimate"},
        {"simulate", "evolve a constant initial state under a constant "
                     "boundary value"},
        {"omega", "classify the long-time limit under a constant boundary "
                  "value"},
        {"wave", "traveling front speed and profile"},
        {"staircase", "waypoint-following boundary control along the steady "
                      "path"},
        {"quasistatic", "smoothest admissible boundary control reaching the "
                        "target"},
        {"min-time", "bisection for the shortest feasible control horizon"},
    };
    std::string config_path, out_override, format_override;
    std::vector<CLI::App*> subs;
    for (const auto& [name, description] : kCommands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path,
                        "JSON config file (defaults apply when omitted)");
        sub->add_option("--out", out_override, "output directory");
        sub->add_option("--format", format_override, "csv or svg");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    std::string experiment;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            experiment = kCommands[i].first;
        }
    }
    RunConfig config;
    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                throw ValidationError("cannot read config file: " +
                                      config_path);
            }
            std::ostringstream buffer;
            buffer << in.rdbuf();
            text = buffer.str();
        }
        config = parse_run_config(text, experiment);
        if (!out_override.empty()) {
            config.out_dir = out_override;
        }
        if (!format_override.empty()) {
            config.format = format_override;
        }
        validate_run_config(config);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    try {
        const RunOutcome outcome = run_experiment(config);
        std::cout << outcome.summary_path << std::endl;
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        json diagnostics;
        diagnostics["experiment"] = config.experiment;
        diagnostics["error"] = e.what();
        diagnostics["config"] = json::parse(config.resolved_json());
        const std::string path =
            (std::filesystem::path(config.out_dir) /
             (config.hash_name() + "-error.json"))
                .string();
        try {
            std::filesystem::create_directories(config.out_dir);
            write_text(path, diagnostics.dump(2));
            std::cerr << "diagnostics: " << path << std::endl;
        } catch (const std::exception&) {
            // stderr already carries the message
        }
        return 3;
    }
}

} // namespace rdc
