#include "rdc/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdc {
namespace {

constexpr double kSweepTol = 1e-12;
constexpr int kMaxSweeps = 50;
constexpr int kMaxSnapshots = 1024;

void validate_field(const Grid& grid, const std::vector<double>& u, const char* what) {
    if (static_cast<int>(u.size()) != grid.nr + 1)
        throw ValidationError(std::string(what) + ": field must have nr + 1 nodes");
    for (double v : u) {
        if (!std::isfinite(v))
            throw ValidationError(std::string(what) + ": non-finite field value");
    }
}

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double checked_boundary_value(double a, const char* what) {
    if (!std::isfinite(a) || a < -1e-12 || a > 1.0 + 1e-12)
        throw ValidationError(std::string(what) + ": boundary value outside [0, 1]");
    return clip01(a);
}

// Initial data must be admissible; tiny negative round-off is forgiven.
std::vector<double> admissible_initial(const Grid& grid, const std::vector<double>& u0) {
    validate_field(grid, u0, "simulate");
    std::vector<double> u = u0;
    for (double& v : u) {
        if (v < -1e-9 || v > 1.0 + 1e-9)
            throw ValidationError("simulate: initial data outside [0, 1]");
        v = clip01(v);
    }
    return u;
}

void validate_schedule(const ControlSchedule& schedule) {
    if (schedule.values.empty())
        throw ValidationError("simulate: schedule needs at least the t = 0 value");
    for (double a : schedule.values) checked_boundary_value(a, "simulate");
}

} // namespace

void validate_grid(const Grid& grid) {
    if (grid.dimension < 1 || grid.dimension > 3)
        throw ValidationError("grid: dimension must be 1, 2, or 3");
    if (!(grid.radius > 0.0) || !std::isfinite(grid.radius))
        throw ValidationError("grid: radius must be positive");
    if (grid.nr < 50)
        throw ValidationError("grid: need at least 50 radial cells");
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt))
        throw ValidationError("grid: dt must be positive");
    if (!(grid.mu > 0.0) || !std::isfinite(grid.mu))
        throw ValidationError("grid: mu must be positive");
}

double default_time_step(const Nonlinearity& nl) {
    return 0.01 * std::min(1.0, 1.0 / nl.lipschitz());
}

std::vector<double> radial_nodes(const Grid& grid) {
    validate_grid(grid);
    const double dr = grid.radius / grid.nr;
    std::vector<double> r(grid.nr + 1);
    for (int i = 0; i <= grid.nr; ++i) r[i] = dr * i;
    r.back() = grid.radius;
    return r;
}

std::vector<double> constant_field(const Grid& grid, double value) {
    validate_grid(grid);
    if (!std::isfinite(value)) throw ValidationError("constant_field: non-finite value");
    return std::vector<double>(grid.nr + 1, clip01(value));
}

std::vector<double> sample_profile(const Grid& grid, const RadialProfile& profile,
                                   double offset) {
    validate_grid(grid);
    if (profile.r.size() < 2 || profile.r.size() != profile.u.size())
        throw ValidationError("sample_profile: malformed profile");
    if (profile.r.back() < grid.radius * (1.0 - 1e-12))
        throw ValidationError("sample_profile: profile does not cover the grid radius");
    std::vector<double> out(grid.nr + 1);
    const double dr = grid.radius / grid.nr;
    for (int i = 0; i <= grid.nr; ++i) {
        const double r = std::min(dr * i, profile.r.back());
        auto hi = std::upper_bound(profile.r.begin(), profile.r.end(), r);
        size_t j = std::min(profile.r.size() - 1,
                            static_cast<size_t>(hi - profile.r.begin()));
        if (j == 0) j = 1;
        const double r0 = profile.r[j - 1], r1 = profile.r[j];
        const double w = (r1 > r0) ? (r - r0) / (r1 - r0) : 0.0;
        out[i] = clip01(profile.u[j - 1] * (1.0 - w) + profile.u[j] * w + offset);
    }
    return out;
}

double field_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size() || p.empty())
        throw ValidationError("field_distance: size mismatch");
    double d = 0.0;
    for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
    return d;
}

ControlSchedule ControlSchedule::constant(double a, int steps) {
    if (steps < 0) throw ValidationError("ControlSchedule: negative step count");
    ControlSchedule s;
    s.values.assign(static_cast<size_t>(steps) + 1, checked_boundary_value(a, "ControlSchedule"));
    return s;
}

ImplicitStepper::ImplicitStepper(const Grid& grid, const Nonlinearity& nl)
    : grid_(grid), nl_(nl) {
    validate_grid(grid_);
    const int n = grid_.nr;
    const double dr = grid_.radius / n;
    const double alpha = grid_.dt * grid_.mu / (dr * dr);
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    // Row 0 encodes L u(0) = N u_rr(0) with the symmetric second difference.
    diag_[0] = 1.0 + 2.0 * grid_.dimension * alpha;
    upper_[0] = -2.0 * grid_.dimension * alpha;
    for (int i = 1; i < n; ++i) {
        const double c = static_cast<double>(grid_.dimension - 1) / (2.0 * i);
        lower_[i] = -alpha * (1.0 - c);
        diag_[i] = 1.0 + 2.0 * alpha;
        upper_[i] = -alpha * (1.0 + c);
    }
    beta_ = -upper_[n - 1]; // multiplies the Dirichlet datum in the last row
    upper_[n - 1] = 0.0;

    // The matrix is fixed per grid; prefactor the Thomas forward sweep.
    cprime_.assign(n, 0.0);
    inv_denom_.assign(n, 0.0);
    inv_denom_[0] = 1.0 / diag_[0];
    cprime_[0] = upper_[0] * inv_denom_[0];
    for (int i = 1; i < n; ++i) {
        inv_denom_[i] = 1.0 / (diag_[i] - lower_[i] * cprime_[i - 1]);
        cprime_[i] = upper_[i] * inv_denom_[i];
    }
    dwork_.assign(n, 0.0);
    iterate_.assign(n, 0.0);
    rhs_.assign(n, 0.0);
}

void ImplicitStepper::advance(std::vector<double>& u, double a_next) {
    validate_field(grid_, u, "step");
    for (double v : u) {
        if (v < -kOvershootMargin - 1e-12 || v > 1.0 + kOvershootMargin + 1e-12)
            throw ValidationError("step: state outside the reaction evaluation window");
    }
    const double a = checked_boundary_value(a_next, "step");
    const int n = grid_.nr;
    const double dt = grid_.dt;
    iterate_.assign(u.begin(), u.begin() + n);
    double delta = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (int i = 0; i < n; ++i)
            rhs_[i] = u[i] + dt * eval_f_extended(nl_, iterate_[i]);
        rhs_[n - 1] += beta_ * a;
        // Prefactored Thomas solve of M x = rhs into dwork_.
        dwork_[0] = rhs_[0] * inv_denom_[0];
        for (int i = 1; i < n; ++i)
            dwork_[i] = (rhs_[i] - lower_[i] * dwork_[i - 1]) * inv_denom_[i];
        for (int i = n - 2; i >= 0; --i)
            dwork_[i] -= cprime_[i] * dwork_[i + 1];
        delta = 0.0;
        for (int i = 0; i < n; ++i)
            delta = std::max(delta, std::abs(dwork_[i] - iterate_[i]));
        iterate_.swap(dwork_);
        if (delta <= kSweepTol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("step: reaction fixed point stalled at residual " +
                             std::to_string(delta));
    std::copy(iterate_.begin(), iterate_.end(), u.begin());
    u[n] = a;
}

void ImplicitStepper::solve_linearized_transpose(const std::vector<double>& state,
                                                 std::vector<double>& vec) const {
    const int n = grid_.nr;
    if (static_cast<int>(state.size()) != n + 1 || static_cast<int>(vec.size()) != n)
        throw ValidationError("solve_linearized_transpose: size mismatch");
    // Bands of (M - dt diag f'(state))^T: sub/super diagonals swap.
    std::vector<double> tl(n, 0.0), td(n, 0.0), tu(n, 0.0), c(n, 0.0);
    for (int i = 0; i < n; ++i) {
        td[i] = diag_[i] - grid_.dt * eval_df_extended(nl_, state[i]);
        if (i >= 1) tl[i] = upper_[i - 1];
        if (i + 1 < n) tu[i] = lower_[i + 1];
    }
    c[0] = tu[0] / td[0];
    vec[0] = vec[0] / td[0];
    for (int i = 1; i < n; ++i) {
        const double denom = td[i] - tl[i] * c[i - 1];
        c[i] = tu[i] / denom;
        vec[i] = (vec[i] - tl[i] * vec[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 0; --i) vec[i] -= c[i] * vec[i + 1];
}

std::vector<double> step(const Grid& grid, const Nonlinearity& nl,
                         const std::vector<double>& u, double a_next) {
    ImplicitStepper stepper(grid, nl);
    std::vector<double> out = u;
    stepper.advance(out, a_next);
    return out;
}

Trajectory simulate(const Grid& grid, const Nonlinearity& nl,
                    const std::vector<double>& u0, const ControlSchedule& schedule) {
    validate_grid(grid);
    validate_schedule(schedule);
    std::vector<double> u = admissible_initial(grid, u0);
    ImplicitStepper stepper(grid, nl);
    const int nt = schedule.steps();
    const int stride = 1 + nt / kMaxSnapshots;

    Trajectory out;
    out.min_per_step.reserve(nt + 1);
    out.max_per_step.reserve(nt + 1);
    auto record_extrema = [&out, &u]() {
        auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        out.min_per_step.push_back(*lo);
        out.max_per_step.push_back(*hi);
    };
    record_extrema();
    out.times.push_back(0.0);
    out.states.push_back(u);
    for (int k = 1; k <= nt; ++k) {
        stepper.advance(u, schedule.values[k]);
        record_extrema();
        if (k % stride == 0 || k == nt) {
            out.times.push_back(grid.dt * k);
            out.states.push_back(u);
        }
    }
    out.terminal = u;
    return out;
}

OmegaResult omega_classify(const Grid& grid, const Nonlinearity& nl,
                           const std::vector<double>& u0, double a_const,
                           double t_max, double tol) {
    validate_grid(grid);
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ValidationError("omega_classify: t_max must be positive");
    if (!(tol > 0.0))
        throw ValidationError("omega_classify: tol must be positive");
    const double a = checked_boundary_value(a_const, "omega_classify");

    std::vector<double> u = admissible_initial(grid, u0);
    ImplicitStepper stepper(grid, nl);
    std::vector<double> prev;
    const long max_steps =
        std::max(1L, static_cast<long>(std::ceil(t_max / grid.dt - 1e-9)));

    OmegaResult res;
    for (long k = 1; k <= max_steps; ++k) {
        prev = u;
        stepper.advance(u, a);
        double diff = 0.0;
        for (size_t i = 0; i < u.size(); ++i)
            diff = std::max(diff, std::abs(u[i] - prev[i]));
        res.residual = diff / grid.dt;
        res.time = grid.dt * k;
        if (res.residual <= tol) {
            res.limit = u;
            auto dist_to = [&u](double c) {
                double d = 0.0;
                for (double v : u) d = std::max(d, std::abs(v - c));
                return d;
            };
            if (dist_to(0.0) <= 1e-3)
                res.kind = OmegaClass::Zero;
            else if (nl.has_theta() && dist_to(nl.theta()) <= 1e-3)
                res.kind = OmegaClass::Theta;
            else if (dist_to(1.0) <= 1e-3)
                res.kind = OmegaClass::One;
            else
                res.kind = OmegaClass::NontrivialSteady;
            return res;
        }
    }
    res.kind = OmegaClass::Undecided;
    res.limit = u;
    return res;
}

} // namespace rdc
