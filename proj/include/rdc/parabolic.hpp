#pragma once

#include <vector>

#include "rdc/nonlinearity.hpp"
#include "rdc/radial_steady.hpp"

namespace rdc {

// Uniform radial mesh for the controlled parabolic problem
//   u_t - mu (u_rr + (N-1)/r u_r) = f(u),  u(R,t) = a(t),  u_r(0,t) = 0.
// Nodes sit at r_i = i*dr, i = 0..nr, dr = R/nr. Node nr carries the
// Dirichlet boundary value; nodes 0..nr-1 are the implicit-solve unknowns.
struct Grid {
    int dimension = 1;
    double radius = 1.0;
    int nr = 50; // radial cells; field vectors have nr+1 nodes
    double dt = 0.01;
    double mu = 1.0;
};

// dimension in {1,2,3}, radius > 0, nr >= 50, dt > 0, mu > 0.
void validate_grid(const Grid& grid);

// Time step with dt * lipschitz(f) <= 0.01, so the reaction fixed point of
// the implicit step contracts far from its sweep cap. Not a stability
// requirement; the diffusion solve is unconditionally stable.
double default_time_step(const Nonlinearity& nl);

// Node coordinates 0, dr, ..., R (size nr+1).
std::vector<double> radial_nodes(const Grid& grid);

// Constant field clipped into [0,1] (size nr+1).
std::vector<double> constant_field(const Grid& grid, double value);

// Profile sampled onto the grid nodes by linear interpolation, shifted by
// offset, clipped into [0,1]. The profile must cover [0, R].
std::vector<double> sample_profile(const Grid& grid, const RadialProfile& profile,
                                   double offset = 0.0);

// Largest |p_i - q_i| over the nodes; sizes must match.
double field_distance(const std::vector<double>& p, const std::vector<double>& q);

// Boundary values on the uniform time grid t_k = k*dt. values[k] is the
// Dirichlet datum at t_k; the step from t_k to t_{k+1} imposes values[k+1],
// so values.size() == steps + 1.
struct ControlSchedule {
    std::vector<double> values;

    static ControlSchedule constant(double a, int steps);
    int steps() const { return static_cast<int>(values.size()) - 1; }
};

struct Trajectory {
    // Strided snapshots (at most ~1024, terminal always included).
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    // Per-step field extrema over all nodes, size steps+1, entry k at t_k.
    std::vector<double> min_per_step;
    std::vector<double> max_per_step;
    std::vector<double> terminal;
};

// One implicit Euler step of the radial problem:
//   (I - dt mu L_h) u^{k+1} = u^k + dt f(u^{k+1}),  u^{k+1}(R) = a_next,
// where L_h is the second-order radial Laplacian with the r = 0
// regularization L u(0) = N u_rr(0) and ghost-free symmetry closure.
// The reaction term is resolved by fixed-point sweeps (a tridiagonal solve
// per sweep), converged when successive sweeps differ by <= 1e-12,
// capped at 50 sweeps.
class ImplicitStepper {
public:
    ImplicitStepper(const Grid& grid, const Nonlinearity& nl);

    const Grid& grid() const { return grid_; }

    // Coefficient of the boundary datum in the last interior row. The
    // gradient of a terminal functional with respect to a step's boundary
    // value is this coefficient times the adjoint state at node nr-1.
    double boundary_coefficient() const { return beta_; }

    // Advances u (size nr+1) in place by one step; sets u[nr] = a_next.
    // NumericalError when the reaction fixed point misses its tolerance.
    void advance(std::vector<double>& u, double a_next);

    // Solves (M - dt diag f'(state))^T x = vec in place on the interior
    // nodes (vec size nr), where M is the implicit matrix and state a
    // converged post-step field. Building block for the discrete adjoint.
    void solve_linearized_transpose(const std::vector<double>& state,
                                    std::vector<double>& vec) const;

private:
    Grid grid_;
    Nonlinearity nl_;
    double beta_ = 0.0;
    std::vector<double> lower_, diag_, upper_; // implicit matrix bands
    std::vector<double> cprime_, inv_denom_, dwork_; // prefactored Thomas sweep
    std::vector<double> iterate_, rhs_;
};

// Single step on a copy of u.
std::vector<double> step(const Grid& grid, const Nonlinearity& nl,
                         const std::vector<double>& u, double a_next);

// Runs schedule.steps() implicit steps from u0 (size nr+1, values in [0,1])
// recording per-step extrema and strided snapshots.
Trajectory simulate(const Grid& grid, const Nonlinearity& nl,
                    const std::vector<double>& u0, const ControlSchedule& schedule);

enum class OmegaClass { Zero, Theta, One, NontrivialSteady, Undecided };

struct OmegaResult {
    OmegaClass kind = OmegaClass::Undecided;
    std::vector<double> limit; // field at the classification (or cutoff) time
    double residual = 0.0;     // last ||u^{k+1} - u^k||_inf / dt
    double time = 0.0;
};

// Evolves u0 under the constant boundary value a_const until the discrete
// time derivative ||u^{k+1} - u^k||_inf / dt drops to tol, then classifies
// the limit by sup-distance <= 1e-3 to the constants 0, theta, 1, falling
// back to NontrivialSteady. Undecided when t_max passes first.
OmegaResult omega_classify(const Grid& grid, const Nonlinearity& nl,
                           const std::vector<double>& u0, double a_const,
                           double t_max = 1e3, double tol = 1e-8);

} // namespace rdc
