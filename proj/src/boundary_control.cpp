#include "rdc/boundary_control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace rdc {
namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::vector<double> clipped_field(const Grid& grid, const std::vector<double>& u,
                                  const char* what) {
    if (static_cast<int>(u.size()) != grid.nr + 1)
        throw ValidationError(std::string(what) + ": field must have nr + 1 nodes");
    std::vector<double> out = u;
    for (double& v : out) {
        if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
            throw ValidationError(std::string(what) + ": field outside [0, 1]");
        v = clip01(v);
    }
    return out;
}

void validate_problem(const OptimizationProblem& pb) {
    validate_grid(pb.grid);
    if (!(pb.eps > 0.0) || !std::isfinite(pb.eps))
        throw ValidationError("optimization problem: eps must be positive");
    if (pb.rate_cap && (!(*pb.rate_cap > 0.0) || !std::isfinite(*pb.rate_cap)))
        throw ValidationError("optimization problem: rate cap must be positive");
    clipped_field(pb.grid, pb.u0, "optimization problem u0");
    clipped_field(pb.grid, pb.target, "optimization problem target");
}

void validate_values(const std::vector<double>& values, const char* what) {
    if (values.empty())
        throw ValidationError(std::string(what) + ": schedule needs at least one value");
    for (double a : values) {
        if (!std::isfinite(a) || a < -1e-12 || a > 1.0 + 1e-12)
            throw ValidationError(std::string(what) + ": boundary value outside [0, 1]");
    }
}

// Interior nodes only; the Dirichlet node is the control, not a state.
double interior_sup_distance(const std::vector<double>& u, const std::vector<double>& target,
                             int nr) {
    double d = 0.0;
    for (int i = 0; i < nr; ++i) d = std::max(d, std::abs(u[i] - target[i]));
    return d;
}

double interior_mismatch(const std::vector<double>& u, const std::vector<double>& target,
                         int nr) {
    double j = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double d = u[i] - target[i];
        j += 0.5 * d * d;
    }
    return j;
}

std::vector<double> run_terminal(ImplicitStepper& stepper, const std::vector<double>& u0,
                                 const std::vector<double>& values) {
    std::vector<double> u = u0;
    for (size_t k = 1; k < values.size(); ++k) stepper.advance(u, clip01(values[k]));
    return u;
}

std::vector<std::vector<double>> run_states(ImplicitStepper& stepper,
                                            const std::vector<double>& u0,
                                            const std::vector<double>& values) {
    std::vector<std::vector<double>> states;
    states.reserve(values.size());
    states.push_back(u0);
    std::vector<double> u = u0;
    for (size_t k = 1; k < values.size(); ++k) {
        stepper.advance(u, clip01(values[k]));
        states.push_back(u);
    }
    return states;
}

// Backward sweep of the exact discrete adjoint: lambda enters as the
// gradient of the functional with respect to the terminal interior state
// and leaves as the gradient with respect to the initial one.
std::vector<double> adjoint_sweep(ImplicitStepper& stepper,
                                  const std::vector<std::vector<double>>& states,
                                  std::vector<double> lambda) {
    const int nt = static_cast<int>(states.size()) - 1;
    const int nr = stepper.grid().nr;
    std::vector<double> g(nt + 1, 0.0);
    for (int k = nt; k >= 1; --k) {
        stepper.solve_linearized_transpose(states[k], lambda);
        g[k] = stepper.boundary_coefficient() * lambda[nr - 1];
    }
    return g;
}

struct SpgOutcome {
    std::vector<double> x;
    int iterations = 0;
    bool criterion = false;
};

// Spectral projected gradient: Barzilai-Borwein steps, nonmonotone Armijo
// over the last 10 values, exact box projection, stall exit after 25
// iterations without meaningful decrease.
SpgOutcome spg_minimize(std::vector<double> x,
                        const std::function<double(const std::vector<double>&)>& value,
                        const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                        const std::function<void(std::vector<double>&)>& project,
                        const std::function<bool(const std::vector<double>&)>& good_enough,
                        int max_iters) {
    project(x);
    if (good_enough(x)) return {std::move(x), 0, true};
    double J = value(x);
    std::vector<double> g = grad(x);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    double t = 1.0 / std::max(1e-12, gmax);
    std::vector<double> jhist{J};
    double best_seen = J;
    int since_best = 0;

    for (int iter = 1; iter <= max_iters; ++iter) {
        const double jref = *std::max_element(jhist.begin(), jhist.end());
        std::vector<double> xn;
        double Jn = 0.0, dirdot = 0.0;
        int back = 0;
        for (;; ++back) {
            xn = x;
            for (size_t i = 0; i < x.size(); ++i) xn[i] -= t * g[i];
            project(xn);
            dirdot = 0.0;
            for (size_t i = 0; i < x.size(); ++i) dirdot += g[i] * (x[i] - xn[i]);
            Jn = value(xn);
            if (Jn <= jref - 1e-4 * dirdot || back >= 50) break;
            t *= 0.5;
        }
        if (back >= 50 && dirdot <= 1e-18)
            return {std::move(x), iter, false}; // the projection pins every direction
        std::vector<double> gn = grad(xn);
        double sy = 0.0, ss = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double si = xn[i] - x[i], yi = gn[i] - g[i];
            sy += si * yi;
            ss += si * si;
        }
        x.swap(xn);
        J = Jn;
        g.swap(gn);
        jhist.push_back(J);
        if (jhist.size() > 10) jhist.erase(jhist.begin());
        if (good_enough(x)) return {std::move(x), iter, true};
        t = (sy > 1e-16 * std::max(ss, 1e-300)) ? std::clamp(ss / sy, 1e-12, 1e12) : 2.0 * t;
        if (J < best_seen - std::max(1e-14, 1e-9 * std::abs(best_seen))) {
            best_seen = J;
            since_best = 0;
        } else if (++since_best >= 25) {
            return {std::move(x), iter, false};
        }
    }
    return {std::move(x), max_iters, false};
}

std::vector<double> resample_values(const std::vector<double>& old, int nt_new) {
    if (old.size() == 1) return std::vector<double>(nt_new + 1, old[0]);
    std::vector<double> out(nt_new + 1);
    const double scale = static_cast<double>(old.size() - 1) / std::max(1, nt_new);
    for (int k = 0; k <= nt_new; ++k) {
        const double pos = k * scale;
        size_t j = std::min(old.size() - 2, static_cast<size_t>(pos));
        const double w = std::min(1.0, pos - j);
        out[k] = clip01(old[j] * (1.0 - w) + old[j + 1] * w);
    }
    return out;
}

} // namespace

std::vector<double> adjoint_gradient(const OptimizationProblem& problem,
                                     const ControlSchedule& schedule) {
    validate_problem(problem);
    validate_values(schedule.values, "adjoint_gradient");
    const int nt = schedule.steps();
    if (nt == 0) return {};
    const int nr = problem.grid.nr;
    std::vector<double> u0 = clipped_field(problem.grid, problem.u0, "adjoint_gradient");
    std::vector<double> target = clipped_field(problem.grid, problem.target, "adjoint_gradient");

    ImplicitStepper stepper(problem.grid, problem.nl);
    std::vector<std::vector<double>> states = run_states(stepper, u0, schedule.values);
    std::vector<double> lambda(nr);
    for (int i = 0; i < nr; ++i) lambda[i] = states.back()[i] - target[i];
    return adjoint_sweep(stepper, states, std::move(lambda));
}

OptimizationResult feasibility_solve(const OptimizationProblem& problem, double horizon,
                                     const std::optional<ControlSchedule>& init) {
    validate_problem(problem);
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("feasibility_solve: horizon must be positive");
    const int nr = problem.grid.nr;
    std::vector<double> u0 = clipped_field(problem.grid, problem.u0, "feasibility_solve");
    std::vector<double> target = clipped_field(problem.grid, problem.target, "feasibility_solve");

    const double dist0 = interior_sup_distance(u0, target, nr);
    if (dist0 <= problem.eps) {
        OptimizationResult res;
        res.schedule.values = {u0[nr]};
        res.terminal_error = dist0;
        res.objective_value = interior_mismatch(u0, target, nr);
        res.converged = true;
        return res;
    }

    const int nt = static_cast<int>(std::lround(horizon / problem.grid.dt));
    if (nt < 1) {
        OptimizationResult res;
        res.schedule.values = {target[nr]};
        res.terminal_error = dist0;
        res.objective_value = interior_mismatch(u0, target, nr);
        res.converged = false;
        return res;
    }

    ImplicitStepper stepper(problem.grid, problem.nl);
    std::vector<double> x = init ? resample_values(init->values, nt)
                                 : std::vector<double>(nt + 1, clip01(target[nr]));

    auto value = [&](const std::vector<double>& v) {
        return interior_mismatch(run_terminal(stepper, u0, v), target, nr);
    };
    auto grad = [&](const std::vector<double>& v) {
        std::vector<std::vector<double>> states = run_states(stepper, u0, v);
        std::vector<double> lambda(nr);
        for (int i = 0; i < nr; ++i) lambda[i] = states.back()[i] - target[i];
        return adjoint_sweep(stepper, states, std::move(lambda));
    };
    auto project = [](std::vector<double>& v) {
        for (double& a : v) a = clip01(a);
    };
    auto good = [&](const std::vector<double>& v) {
        return interior_sup_distance(run_terminal(stepper, u0, v), target, nr) <= problem.eps;
    };

    SpgOutcome out = spg_minimize(std::move(x), value, grad, project, good, 400);

    OptimizationResult res;
    res.schedule.values = std::move(out.x);
    std::vector<double> terminal = run_terminal(stepper, u0, res.schedule.values);
    res.terminal_error = interior_sup_distance(terminal, target, nr);
    res.objective_value = interior_mismatch(terminal, target, nr);
    res.iterations = out.iterations;
    res.converged = res.terminal_error <= problem.eps;
    return res;
}

MinTimeResult min_time_search(const OptimizationProblem& problem, double t_hi,
                              std::optional<double> init_boundary) {
    validate_problem(problem);
    if (!(t_hi > 0.0) || !std::isfinite(t_hi))
        throw ValidationError("min_time_search: horizon bound must be positive");
    const int nr = problem.grid.nr;
    std::vector<double> u0 = clipped_field(problem.grid, problem.u0, "min_time_search");
    std::vector<double> target = clipped_field(problem.grid, problem.target, "min_time_search");

    MinTimeResult out;
    if (interior_sup_distance(u0, target, nr) <= problem.eps) {
        out.t_min = 0.0;
        out.best = feasibility_solve(problem, t_hi); // returns the trivial schedule
        return out;
    }

    auto probe = [&](double T, const std::optional<ControlSchedule>& warm) {
        OptimizationResult r = feasibility_solve(problem, T, warm);
        out.probes.push_back({T, r.converged, r.terminal_error});
        return r;
    };

    const double seed = clip01(init_boundary.value_or(target[nr]));
    ControlSchedule warm0;
    warm0.values = {seed};
    OptimizationResult hi_res = probe(t_hi, warm0);
    if (!hi_res.converged)
        throw NumericalError("min_time_search: infeasible at the horizon " +
                             std::to_string(t_hi) + " (terminal error " +
                             std::to_string(hi_res.terminal_error) + ")");

    double lo = 0.0, hi = t_hi;
    OptimizationResult best = std::move(hi_res);
    while (hi - lo > 0.01 * t_hi) {
        const double mid = 0.5 * (lo + hi);
        OptimizationResult r = probe(mid, best.schedule);
        if (r.converged) {
            hi = mid;
            best = std::move(r);
        } else {
            lo = mid;
        }
    }

    // Near the minimal time the control is bang-bang except for singular
    // stretches, whose discrete counterpart is duty-cycle chattering between
    // the bounds. The warm-started descent stops at its first feasible
    // iterate and keeps smooth mid-range values instead, so the feasible
    // endpoint's schedule is re-expressed by sigma-delta dithering to {0,1}.
    // The last few steps stay verbatim: they pin the boundary layer that the
    // terminal tube reads one node inside the wall, and dithering them moves
    // the terminal state by far more than eps.
    if (best.schedule.values.size() > 3) {
        ImplicitStepper stepper(problem.grid, problem.nl);
        auto interior_error = [&](const std::vector<double>& vals) {
            return interior_sup_distance(run_terminal(stepper, u0, vals), target, nr);
        };
        const std::vector<double>& w = best.schedule.values;
        std::vector<double> dithered(w.size());
        double carry = 0.0;
        for (size_t k = 0; k < w.size(); ++k) {
            const double x = w[k] + carry;
            dithered[k] = x >= 0.5 ? 1.0 : 0.0;
            carry = x - dithered[k];
        }
        std::vector<double> best_init;
        double best_init_err = 1e300;
        bool replaced = false;
        for (size_t keep : {2, 3, 4, 6, 8}) {
            if (keep + 1 >= w.size()) break;
            std::vector<double> candidate = dithered;
            std::copy(w.end() - keep, w.end(), candidate.end() - keep);
            const double err = interior_error(candidate);
            if (err < best_init_err) {
                best_init_err = err;
                best_init = candidate;
            }
            if (err <= problem.eps) {
                out.probes.push_back({hi, true, err});
                best.schedule.values = std::move(candidate);
                best.terminal_error = err;
                best.objective_value =
                    interior_mismatch(run_terminal(stepper, u0, best.schedule.values), target, nr);
                best.iterations = 0;
                best.converged = true;
                replaced = true;
                break;
            }
        }
        if (!replaced && !best_init.empty()) {
            ControlSchedule init;
            init.values = std::move(best_init);
            OptimizationResult repaired = feasibility_solve(problem, hi, init);
            if (repaired.converged) {
                out.probes.push_back({hi, true, repaired.terminal_error});
                best = std::move(repaired);
            }
        }
    }

    out.t_min = hi;
    out.best = std::move(best);
    return out;
}

StaircaseResult staircase_schedule(const SteadyPath& path, const Grid& grid,
                                   const Nonlinearity& nl, const std::vector<double>& u0,
                                   double dwell, double eps) {
    validate_grid(grid);
    if (path.profiles.empty() || path.trace.size() != path.profiles.size())
        throw ValidationError("staircase_schedule: malformed path");
    if (!(dwell > 0.0) || !std::isfinite(dwell))
        throw ValidationError("staircase_schedule: dwell must be positive");
    if (!(eps > 0.0))
        throw ValidationError("staircase_schedule: eps must be positive");
    std::vector<double> u = clipped_field(grid, u0, "staircase_schedule");
    const std::vector<double> u_init = u;

    const std::vector<double> first_wp = sample_profile(grid, path.profiles.front());
    const std::vector<double> last_wp = sample_profile(grid, path.profiles.back());

    ImplicitStepper stepper(grid, nl);
    std::vector<double> values{clip01(path.trace.front())};
    auto hit = [&]() { return interior_sup_distance(u, last_wp, grid.nr) <= eps; };

    bool done = hit();

    // Phase 1: free decay toward the path start.
    if (!done) {
        const double threshold = *std::max_element(first_wp.begin(), first_wp.end()) + eps;
        const long cap = static_cast<long>(std::ceil(500.0 / grid.dt));
        long steps = 0;
        while (*std::max_element(u.begin(), u.end() - 1) > threshold) {
            if (++steps > cap)
                throw NumericalError(
                    "staircase_schedule: initial state did not relax to the path start");
            stepper.advance(u, 0.0);
            values.push_back(0.0);
            if ((done = hit())) break;
        }
    }

    // Phase 2: hop from waypoint to waypoint. Holding each waypoint's trace
    // for the dwell is only the initial guess of the hop: along much of the
    // path the waypoints are not the minimal steady states of their own
    // boundary datum, so a pure hold collapses onto the minimal branch and
    // never climbs. Each hop therefore refines the held trace by a local
    // feasibility solve over the dwell horizon, which is the numerical form
    // of the local controllability the staircase argument rests on. Where
    // the waypoints are attracting, the solve accepts the hold unchanged.
    long phase2_steps = 0;
    for (size_t j = 0; j < path.trace.size() && !done; ++j) {
        OptimizationProblem hop;
        hop.grid = grid;
        hop.nl = nl;
        hop.u0 = u;
        for (double& v : hop.u0) v = clip01(v);
        hop.u0[grid.nr] = values.back();
        hop.target = sample_profile(grid, path.profiles[j]);
        hop.eps = eps;
        ControlSchedule held;
        held.values = {clip01(path.trace[j])};
        OptimizationResult leg = feasibility_solve(hop, dwell, held);
        for (size_t k = 1; k < leg.schedule.values.size() && !done; ++k) {
            stepper.advance(u, leg.schedule.values[k]);
            values.push_back(leg.schedule.values[k]);
            ++phase2_steps;
            done = hit();
        }
    }
    if (!done) done = hit(); // the last hop may have been skipped as already close

    // Extension: hold the final trace for at most 4x the phase-2 duration.
    const double a_last = clip01(path.trace.back());
    for (long s = 0; s < 4 * phase2_steps && !done; ++s) {
        stepper.advance(u, a_last);
        values.push_back(a_last);
        done = hit();
    }

    const double achieved = interior_sup_distance(u, last_wp, grid.nr);
    if (!done)
        throw NumericalError("staircase_schedule: terminal contract unmet; achieved distance " +
                             std::to_string(achieved));

    StaircaseResult res;
    res.schedule.values = std::move(values);
    res.trajectory = simulate(grid, nl, u_init, res.schedule);
    res.terminal_error = interior_sup_distance(res.trajectory.terminal, last_wp, grid.nr);
    return res;
}

OptimizationResult quasistatic_optimize(const OptimizationProblem& problem, double horizon) {
    validate_problem(problem);
    if (problem.objective != Objective::ControlSmoothness)
        throw ValidationError("quasistatic_optimize: objective must be ControlSmoothness");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("quasistatic_optimize: horizon must be positive");
    const Grid& grid = problem.grid;
    const int nr = grid.nr;
    const int nt = static_cast<int>(std::lround(horizon / grid.dt));
    if (nt < 1)
        throw ValidationError("quasistatic_optimize: horizon shorter than one step");
    std::vector<double> u0 = clipped_field(grid, problem.u0, "quasistatic_optimize");
    std::vector<double> target = clipped_field(grid, problem.target, "quasistatic_optimize");

    // The schedule lives on a coarse knot grid (piecewise-linear in time);
    // the smoothness objective makes finer structure pointless and the
    // reduced dimension keeps the descent well conditioned.
    const int m = std::min(nt + 1, 129);
    auto expand = [&](const std::vector<double>& z) {
        std::vector<double> x(nt + 1);
        const double scale = static_cast<double>(m - 1) / nt;
        for (int k = 0; k <= nt; ++k) {
            const double pos = k * scale;
            int j = std::min(m - 2, static_cast<int>(pos));
            const double w = std::min(1.0, pos - j);
            x[k] = z[j] * (1.0 - w) + z[j + 1] * w;
        }
        return x;
    };
    auto contract = [&](const std::vector<double>& gx) {
        std::vector<double> gz(m, 0.0);
        const double scale = static_cast<double>(m - 1) / nt;
        for (int k = 0; k <= nt; ++k) {
            const double pos = k * scale;
            int j = std::min(m - 2, static_cast<int>(pos));
            const double w = std::min(1.0, pos - j);
            gz[j] += gx[k] * (1.0 - w);
            gz[j + 1] += gx[k] * w;
        }
        return gz;
    };

    const double dt = grid.dt;
    const double eps_eff = 0.9 * problem.eps; // slack so finite beta lands inside the tube
    const double cap = problem.rate_cap.value_or(0.0);
    const double cap_eff = 0.95 * cap;
    ImplicitStepper stepper(grid, problem.nl);

    auto smoothness = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (int k = 1; k <= nt; ++k) {
            const double d = x[k] - x[k - 1];
            s += d * d / dt;
        }
        return s;
    };
    auto tube_excess = [&](const std::vector<double>& terminal, double margin) {
        double p = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double e = std::abs(terminal[i] - target[i]) - margin;
            if (e > 0.0) p += e * e;
        }
        return p;
    };
    auto rate_excess = [&](const std::vector<double>& x, double margin) {
        if (!problem.rate_cap) return 0.0;
        double p = 0.0;
        for (int k = 1; k <= nt; ++k) {
            const double e = std::abs(x[k] - x[k - 1]) / dt - margin;
            if (e > 0.0) p += e * e * dt;
        }
        return p;
    };

    double beta = 64.0;
    std::vector<double> z(m);
    for (int j = 0; j < m; ++j)
        z[j] = u0[nr] + (target[nr] - u0[nr]) * j / static_cast<double>(m - 1);

    auto value = [&](const std::vector<double>& zz) {
        const std::vector<double> x = expand(zz);
        const std::vector<double> terminal = run_terminal(stepper, u0, x);
        return smoothness(x) + beta * (tube_excess(terminal, eps_eff) + rate_excess(x, cap_eff));
    };
    auto grad = [&](const std::vector<double>& zz) {
        const std::vector<double> x = expand(zz);
        std::vector<std::vector<double>> states = run_states(stepper, u0, x);
        std::vector<double> gx(nt + 1, 0.0);
        for (int k = 0; k <= nt; ++k) {
            if (k >= 1) gx[k] += 2.0 * (x[k] - x[k - 1]) / dt;
            if (k < nt) gx[k] -= 2.0 * (x[k + 1] - x[k]) / dt;
        }
        if (problem.rate_cap) {
            for (int k = 1; k <= nt; ++k) {
                const double d = x[k] - x[k - 1];
                const double e = std::abs(d) / dt - cap_eff;
                if (e > 0.0) {
                    const double g = beta * 2.0 * e * ((d > 0.0) ? 1.0 : -1.0);
                    gx[k] += g;
                    gx[k - 1] -= g;
                }
            }
        }
        std::vector<double> lambda(nr, 0.0);
        bool any = false;
        for (int i = 0; i < nr; ++i) {
            const double d = states.back()[i] - target[i];
            const double e = std::abs(d) - eps_eff;
            if (e > 0.0) {
                lambda[i] = beta * 2.0 * e * ((d > 0.0) ? 1.0 : -1.0);
                any = true;
            }
        }
        if (any) {
            std::vector<double> gp = adjoint_sweep(stepper, states, std::move(lambda));
            for (int k = 0; k <= nt; ++k) gx[k] += gp[k];
        }
        std::vector<double> gz = contract(gx);
        gz[0] = 0.0; // the t = 0 boundary value is pinned to u0's trace
        return gz;
    };
    auto project = [&](std::vector<double>& zz) {
        for (double& a : zz) a = clip01(a);
        zz[0] = clip01(u0[nr]);
    };
    auto feasible = [&](const std::vector<double>& zz) {
        const std::vector<double> x = expand(zz);
        const std::vector<double> terminal = run_terminal(stepper, u0, x);
        if (interior_sup_distance(terminal, target, nr) > problem.eps) return false;
        if (problem.rate_cap) {
            for (int k = 1; k <= nt; ++k)
                if (std::abs(x[k] - x[k - 1]) / dt > *problem.rate_cap) return false;
        }
        return true;
    };

    int iterations = 0;
    bool ok = false;
    for (int doubling = 0; doubling <= 20; ++doubling) {
        SpgOutcome out = spg_minimize(std::move(z), value, grad, project, feasible, 300);
        z = std::move(out.x);
        iterations += out.iterations;
        if (out.criterion || feasible(z)) {
            ok = true;
            break;
        }
        beta *= 2.0;
    }
    if (!ok)
        throw NumericalError("quasistatic_optimize: penalty continuation exceeded 20 doublings");

    OptimizationResult res;
    res.schedule.values = expand(z);
    for (double& a : res.schedule.values) a = clip01(a);
    const std::vector<double> terminal = run_terminal(stepper, u0, res.schedule.values);
    res.terminal_error = interior_sup_distance(terminal, target, nr);
    res.objective_value = smoothness(res.schedule.values);
    res.iterations = iterations;
    res.converged = res.terminal_error <= problem.eps;
    return res;
}

} // namespace rdc
