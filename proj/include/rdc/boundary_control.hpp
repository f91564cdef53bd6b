#pragma once

#include <optional>
#include <vector>

#include "rdc/nonlinearity.hpp"
#include "rdc/parabolic.hpp"
#include "rdc/radial_steady.hpp"

namespace rdc {

enum class Objective { TerminalMismatch, ControlSmoothness };

// Terminal functionals act on the interior nodes 0..nr-1: the Dirichlet node
// is the control itself, so including it would pin a(T) to the target trace
// and rule out bang-bang arcs that run to the final time.
struct OptimizationProblem {
    Grid grid;
    Nonlinearity nl = Nonlinearity::logistic();
    std::vector<double> u0;     // size nr+1, values in [0,1]
    std::vector<double> target; // size nr+1, values in [0,1]
    double eps = 0.01;          // terminal sup-norm tolerance
    std::optional<double> rate_cap; // bound on |da/dt| (smoothness objective)
    Objective objective = Objective::TerminalMismatch;
};

struct OptimizationResult {
    ControlSchedule schedule;
    double terminal_error = 0.0;  // interior sup-distance of u(T) to target
    double objective_value = 0.0; // mismatch: 1/2 sum d^2; smoothness: sum (da)^2/dt
    int iterations = 0;
    bool converged = false;
};

// Gradient of 1/2 sum_{i<nr} (u_i(T) - target_i)^2 with respect to the
// boundary values, by the exact discrete adjoint of the implicit step:
// transposed tridiagonal solves backward in time with the reaction
// linearized at the converged forward states. Entry k matches values[k];
// entry 0 is zero (the t = 0 value enters no step). Empty for a
// zero-length schedule.
std::vector<double> adjoint_gradient(const OptimizationProblem& problem,
                                     const ControlSchedule& schedule);

// Drives the terminal state into the eps-tube around the target on the
// fixed horizon T by spectral projected gradient descent (Barzilai-Borwein
// steps, Armijo safeguard, exact box projection onto [0,1]). Success iff
// the terminal sup-error reaches eps; otherwise the best iterate is
// returned with converged = false. When the initial state is already
// within eps the zero-length schedule is returned at iteration 0.
// `init` seeds the first iterate (resampled in time as needed); default is
// the constant schedule at the target's boundary trace.
OptimizationResult feasibility_solve(const OptimizationProblem& problem, double horizon,
                                     const std::optional<ControlSchedule>& init = {});

struct MinTimeProbe {
    double horizon = 0.0;
    bool feasible = false;
    double terminal_error = 0.0;
};

struct MinTimeResult {
    double t_min = 0.0;
    OptimizationResult best; // the feasible endpoint's solve
    std::vector<MinTimeProbe> probes;
};

// Bisects the horizon over [0, t_hi] on the feasibility predicate, each
// probe warm-started from the nearest feasible schedule resampled in time,
// until the bracket width reaches 1e-2 * t_hi. init_boundary seeds the
// first probe's constant schedule (default: the target's boundary trace).
// The feasible endpoint is then re-solved from its {0,1}-rounded schedule;
// when the repair stays feasible it is the reported result, exposing the
// bang-bang structure the warm-started iterates smooth over. Every solve,
// including the repair, appears in the probe log. NumericalError when t_hi
// itself is infeasible.
MinTimeResult min_time_search(const OptimizationProblem& problem, double t_hi = 100.0,
                              std::optional<double> init_boundary = {});

struct StaircaseResult {
    ControlSchedule schedule;
    Trajectory trajectory;
    double terminal_error = 0.0; // interior sup-distance to the final waypoint
};

// Realizes the path-following control: phase 1 holds a = 0 until the state
// max falls to the first waypoint's max + eps; phase 2 hops from waypoint
// to waypoint, each hop a local feasibility solve over the dwell horizon
// seeded with the constant hold of that waypoint's trace, then holds the
// last trace for up to 4x the phase-2 duration. The local solves matter:
// most waypoints are not the minimal steady states of their own boundary
// datum, so the plain hold collapses onto the minimal branch and stalls,
// which is exactly why path-following needs local controllability between
// neighbors. The schedule stops at the first step whose interior
// sup-distance to the final waypoint is at most eps (the θ state can be
// unstable, so dwelling past the hit is wrong). NumericalError with the
// achieved distance when the contract is never met.
StaircaseResult staircase_schedule(const SteadyPath& path, const Grid& grid,
                                   const Nonlinearity& nl, const std::vector<double>& u0,
                                   double dwell, double eps);

// Minimizes the control smoothness sum_k (a_k - a_{k-1})^2 / dt subject to
// the terminal eps-tube (and the rate cap when set), both enforced by a
// quadratic penalty whose weight doubles until satisfied (at most 20
// doublings, then NumericalError). The first boundary value is pinned to
// u0's trace; the iterate is a linear ramp to the target trace,
// parameterized on a coarse knot grid. objective_value is the smoothness
// term alone.
OptimizationResult quasistatic_optimize(const OptimizationProblem& problem, double horizon);

} // namespace rdc
