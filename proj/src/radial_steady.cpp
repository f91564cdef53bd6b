#include "rdc/radial_steady.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <numbers>
#include <string>

namespace rdc {

namespace {

constexpr double kScanStep = 1e-3;   // center-value scan resolution
constexpr double kScaledCutoff = 100.0; // r_max = 100 sqrt(mu) in scaled radius

struct State {
    double u, v;
};

// Right-hand side of du/ds = v, dv/ds = -(N-1)/s v - f(u), s = r/sqrt(mu).
State rhs(const Nonlinearity& nl, int N, double s, State y) {
    return {y.v, -(N - 1) / s * y.v - eval_f_extended(nl, y.u)};
}

State rk4(const Nonlinearity& nl, int N, double s, State y, double ds) {
    State k1 = rhs(nl, N, s, y);
    State k2 = rhs(nl, N, s + 0.5 * ds, {y.u + 0.5 * ds * k1.u, y.v + 0.5 * ds * k1.v});
    State k3 = rhs(nl, N, s + 0.5 * ds, {y.u + 0.5 * ds * k2.u, y.v + 0.5 * ds * k2.v});
    State k4 = rhs(nl, N, s + ds, {y.u + ds * k3.u, y.v + ds * k3.v});
    return {y.u + ds / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
            y.v + ds / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

// Series step away from the r = 0 singularity.
State series_step(const Nonlinearity& nl, int N, double a, double ds) {
    double fa = eval_f_extended(nl, a);
    return {a - fa * ds * ds / (2.0 * N), -fa * ds / N};
}

State advance(const Nonlinearity& nl, int N, double s, State y, double ds,
              double a, bool from_origin) {
    return from_origin ? series_step(nl, N, a, ds) : rk4(nl, N, s, y, ds);
}

bool in_window(double u) { return u >= -kOvershootMargin && u <= 1.0 + kOvershootMargin; }

// First zero of u in scaled radius for the mu=1 problem, shot from center a.
// Bisection on single-step dense output reaches 1e-9; nullopt when the
// trajectory is trapped (energy sinks below zero for N >= 2) or reaches
// s_cap without a sign change.
std::optional<double> zero_radius_scaled(const Nonlinearity& nl, double a,
                                         int N, double ds, double s_cap) {
    State y{a, 0.0};
    double s = 0.0;
    long k = 0;
    while (s < s_cap) {
        State next = advance(nl, N, s, y, ds, a, k == 0);
        double s_next = s + ds;
        if (!in_window(next.u))
            throw NumericalError("first_zero_radius: blow-up at scaled radius " +
                                 std::to_string(s_next));
        if (next.u <= 0.0) {
            double lo = s, hi = s_next;
            bool from_origin = (k == 0);
            while (hi - lo > 1e-9) {
                double mid = 0.5 * (lo + hi);
                State ym = advance(nl, N, s, y, mid - s, a, from_origin);
                (ym.u > 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        if (N >= 2 && (k & 63) == 0 &&
            0.5 * next.v * next.v + eval_F_extended(nl, next.u) < -1e-12)
            return std::nullopt; // trapped in the invariant region
        y = next;
        s = s_next;
        ++k;
    }
    return std::nullopt;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    return golden_min([&](double x) { return -f(x); }, lo, hi, tol);
}

// Scan start for barrier shooting: centers below theta1 cannot reach zero
// (energy argument), so bistable scans start there; monostable scans start
// at the origin.
double scan_floor(const Classification& cls) {
    return cls.bistable() ? *cls.theta1 : 0.0;
}

void check_common(double mu, int N, const char* what) {
    if (!(mu > 0.0)) throw ValidationError(std::string(what) + ": mu must be positive");
    if (N < 1) throw ValidationError(std::string(what) + ": dimension must be >= 1");
}

} // namespace

RadialProfile integrate_radial(const Nonlinearity& nl, double a, double mu,
                               int N, double R, double h) {
    check_common(mu, N, "integrate_radial");
    if (!(a >= 0.0 && a <= 1.0))
        throw ValidationError("integrate_radial: center value outside [0,1]");
    if (!(R > 0.0)) throw ValidationError("integrate_radial: radius must be positive");
    if (!(h > 0.0) || h > R / 200.0)
        throw ValidationError("integrate_radial: need 0 < h <= R/200");

    const int n = static_cast<int>(std::ceil(R / h - 1e-9));
    const double sq = std::sqrt(mu);
    const double ds = (R / sq) / n;
    const double dr = R / n;

    RadialProfile p;
    p.center_value = a;
    p.dimension = N;
    p.mu = mu;
    p.radius = R;
    p.r.reserve(n + 1);
    p.u.reserve(n + 1);
    p.v.reserve(n + 1);
    p.r.push_back(0.0);
    p.u.push_back(a);
    p.v.push_back(0.0);

    State y{a, 0.0};
    for (int k = 0; k < n; ++k) {
        y = advance(nl, N, k * ds, y, ds, a, k == 0);
        if (!in_window(y.u))
            throw NumericalError("integrate_radial: blow-up at radius " +
                                 std::to_string((k + 1) * dr));
        p.r.push_back((k + 1) * dr);
        p.u.push_back(y.u);
        p.v.push_back(y.v);
    }
    p.r.back() = R;
    return p;
}

std::optional<double> first_zero_radius(const Nonlinearity& nl, double a,
                                        double mu, int N, double h) {
    check_common(mu, N, "first_zero_radius");
    if (!(a > 0.0 && a < 1.0))
        throw ValidationError("first_zero_radius: center value outside (0,1)");
    if (!(h > 0.0)) throw ValidationError("first_zero_radius: h must be positive");

    auto cls = classify(nl);
    if (cls.bistable() && eval_F_extended(nl, a) <= 0.0)
        return std::nullopt; // invariant region: u stays positive

    double sq = std::sqrt(mu);
    auto s0 = zero_radius_scaled(nl, a, N, h / sq, kScaledCutoff);
    if (!s0) return std::nullopt;
    return *s0 * sq;
}

std::vector<Barrier> find_barriers(const Nonlinearity& nl, double mu, int N,
                                   double R) {
    check_common(mu, N, "find_barriers");
    if (!(R > 0.0)) throw ValidationError("find_barriers: radius must be positive");
    auto cls = classify(nl);

    const double sq = std::sqrt(mu);
    const double target = R / sq; // zero radius in scaled coordinates
    const double floor_a = scan_floor(cls);
    const double cap = std::min(kScaledCutoff, 4.0 * target + 10.0);
    const double ds_scan = 0.01;

    // The final profile integrator's step, replicated here so the center
    // bisection zeroes the trace of the very discretization that gets stored.
    const double h_prof = std::min(R / 2000.0, sq * 0.01);
    const int n_prof = static_cast<int>(std::ceil(R / h_prof - 1e-9));
    const double ds_prof = target / n_prof;

    auto sign_of = [&](double a, double ds) {
        auto rho = zero_radius_scaled(nl, a, N, ds, cap);
        if (!rho) return 1;
        return (*rho > target) ? 1 : -1;
    };

    // Barriers can hug the scan endpoints (centers within 1e-10 of 1 at small
    // mu), so both endpoints enter the sign sequence. Their signs are honest
    // evaluations: just below theta1 the orbit is trapped, and at a = 1 the
    // state never leaves the equilibrium; either way no zero is found.
    std::vector<double> grid;
    if (cls.bistable()) grid.push_back(std::max(floor_a - 1e-9, 0.5 * floor_a));
    for (double a = floor_a + kScanStep; a < 1.0 - 1e-12; a += kScanStep)
        grid.push_back(a);
    grid.push_back(1.0);

    std::vector<Barrier> out;
    int prev_sign = 0;
    double prev_a = 0.0;
    for (double a : grid) {
        int s = sign_of(a, ds_scan);
        if (prev_sign != 0 && s != prev_sign) {
            double lo = prev_a, hi = a;
            int lo_sign = prev_sign;
            while (hi - lo > 2.5e-16) {
                double mid = 0.5 * (lo + hi);
                if (sign_of(mid, ds_prof) == lo_sign) lo = mid;
                else hi = mid;
            }
            double center = 0.5 * (lo + hi);
            Barrier b;
            b.center_value = center;
            b.profile = integrate_radial(nl, center, mu, N, R, h_prof);
            out.push_back(std::move(b));
        }
        prev_sign = s;
        prev_a = a;
    }

    double theta = cls.bistable() ? nl.theta() : 0.0;
    for (auto& b : out) {
        double umax = *std::max_element(b.profile.u.begin(), b.profile.u.end());
        if (!(umax > theta))
            throw Error("find_barriers: barrier maximum not above the interior zero");
        for (std::size_t i = 0; i + 1 < b.profile.u.size(); ++i)
            if (!(b.profile.u[i] > 0.0))
                throw Error("find_barriers: barrier not positive on the interior");
    }
    if (!out.empty()) out.front().is_minimal = true;
    return out;
}

double mu_star_numeric(const Nonlinearity& nl, int N, double R) {
    check_common(1.0, N, "mu_star_numeric");
    if (!(R > 0.0)) throw ValidationError("mu_star_numeric: radius must be positive");
    auto cls = classify(nl);
    if (cls.variant == Variant::BistableF1Zero)
        throw ValidationError("mu_star_numeric: no threshold when F(1) = 0");

    const double floor_a = scan_floor(cls);
    double best = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (double a = floor_a + kScanStep; a < 1.0 - 1e-12; a += kScanStep) {
        double cap = std::min(kScaledCutoff, best * 1.5 + 1.0);
        auto rho = zero_radius_scaled(nl, a, N, 0.01, cap);
        if (rho && *rho < best) {
            best = *rho;
            best_a = a;
        }
    }
    if (!std::isfinite(best))
        throw NumericalError("mu_star_numeric: no zero radius for any center value");

    double lo = std::max(floor_a + 1e-9, best_a - kScanStep);
    double hi = std::min(1.0 - 1e-9, best_a + kScanStep);
    auto rho_of = [&](double a) {
        auto rho = zero_radius_scaled(nl, a, N, 0.002, best * 1.5 + 1.0);
        return rho ? *rho : std::numeric_limits<double>::infinity();
    };
    double a_min = golden_min(rho_of, lo, hi, 1e-10);
    auto rho_min = zero_radius_scaled(nl, a_min, N, 0.001, best * 1.5 + 1.0);
    if (!rho_min)
        throw NumericalError("mu_star_numeric: refinement lost the zero radius");
    double q = R / *rho_min;
    return q * q;
}

LowerBound mu_star_lower_bound(const Nonlinearity& nl, int N, double measure) {
    check_common(1.0, N, "mu_star_lower_bound");
    if (!(measure > 0.0))
        throw ValidationError("mu_star_lower_bound: measure must be positive");
    auto cls = classify(nl);
    if (!cls.bistable())
        throw ValidationError("mu_star_lower_bound: requires a bistable term");
    if (cls.F1 <= 1e-12) return {0.0, false, 0.0};

    const double F1 = cls.F1, Ft = *cls.Ftheta;
    const double dmax = 1.0 - std::pow(-Ft / (F1 - Ft), 1.0 / N);
    const double gamma_pow = std::pow(std::tgamma(N / 2.0 + 1.0), 2.0 / N);
    const double m_pow = std::pow(measure, 2.0 / N);
    auto bound = [&](double d) {
        double w = std::pow(1.0 - d, N);
        return 2.0 * d * d * gamma_pow * (Ft + w * (F1 - Ft)) * m_pow /
               (std::numbers::pi * (1.0 - w));
    };
    double d_star = golden_max(bound, 1e-12, dmax * (1.0 - 1e-12), 1e-10);
    return {bound(d_star), true, d_star};
}

double mu_star_upper_bound(const Nonlinearity& nl, double lambda1_value) {
    if (!(lambda1_value > 0.0))
        throw ValidationError("mu_star_upper_bound: lambda1 must be positive");
    auto quot = [&](double s) { return eval_f_extended(nl, s) / s; };
    double interior = quot(golden_max(quot, 1e-6, 1.0, 1e-12));
    double at_zero = eval_df_extended(nl, 0.0); // lim_{s->0+} f(s)/s
    double best = std::max({interior, at_zero, quot(1.0)});
    return best / lambda1_value;
}

double lambda1(const Domain& domain) {
    const double pi = std::numbers::pi;
    if (domain.kind == Domain::Kind::Interval) {
        if (!(domain.extent > 0.0))
            throw ValidationError("lambda1: interval length must be positive");
        double q = pi / domain.extent;
        return q * q;
    }
    if (!(domain.extent > 0.0))
        throw ValidationError("lambda1: ball radius must be positive");
    switch (domain.dimension) {
    case 1:
        return lambda1(Domain::interval(2.0 * domain.extent));
    case 2: {
        constexpr double j01 = 2.404825557695773; // first zero of Bessel J0
        double q = j01 / domain.extent;
        return q * q;
    }
    case 3: {
        double q = pi / domain.extent;
        return q * q;
    }
    default:
        throw ValidationError("lambda1: dimensions above 3 are unsupported");
    }
}

double ball_measure(int N, double R) {
    check_common(1.0, N, "ball_measure");
    if (!(R > 0.0)) throw ValidationError("ball_measure: radius must be positive");
    if (N == 1) return 2.0 * R;
    return std::pow(std::numbers::pi, N / 2.0) * std::pow(R, N) /
           std::tgamma(N / 2.0 + 1.0);
}

double sup_distance(const RadialProfile& p, const RadialProfile& q) {
    if (p.u.size() != q.u.size())
        throw ValidationError("sup_distance: profiles sampled on different grids");
    double d = 0.0;
    for (std::size_t i = 0; i < p.u.size(); ++i)
        d = std::max(d, std::abs(p.u[i] - q.u[i]));
    return d;
}

namespace {

// Shared refinement: bisect the center-value grid until neighbors are closer
// than tol in sup norm. The list never shrinks, so the cap guards runaway.
void refine_gaps(std::list<std::pair<double, RadialProfile>>& entries,
                 const Nonlinearity& nl, double mu, int N, double R, double h,
                 double tol) {
    constexpr std::size_t kMaxProfiles = 100000;
    auto it = entries.begin();
    while (std::next(it) != entries.end()) {
        auto nx = std::next(it);
        if (sup_distance(it->second, nx->second) <= tol) {
            ++it;
            continue;
        }
        if (entries.size() >= kMaxProfiles)
            throw NumericalError("build_path: refinement exceeded 100000 profiles");
        double gap = nx->first - it->first;
        if (gap < 1e-15)
            throw NumericalError("build_path: refinement stalled at center value " +
                                 std::to_string(it->first));
        double mid = it->first + 0.5 * gap;
        entries.insert(nx, {mid, integrate_radial(nl, mid, mu, N, R, h)});
    }
}

SteadyPath assemble(std::list<std::pair<double, RadialProfile>>&& entries) {
    SteadyPath path;
    path.profiles.reserve(entries.size());
    for (auto& e : entries) path.profiles.push_back(std::move(e.second));
    path.trace.reserve(path.profiles.size());
    for (const auto& p : path.profiles) {
        for (double x : p.u)
            if (!(x >= -1e-9 && x <= 1.0 + 1e-9))
                throw Error("build_path: inadmissible profile on the path");
        path.trace.push_back(p.trace());
    }
    for (std::size_t k = 0; k + 1 < path.profiles.size(); ++k)
        path.continuity_bound = std::max(
            path.continuity_bound,
            sup_distance(path.profiles[k], path.profiles[k + 1]));
    return path;
}

double path_step(double mu, double R) {
    // ds <= 0.02 in scaled radius, and never coarser than R/2000.
    double S = R / std::sqrt(mu);
    int n = std::max(2000, static_cast<int>(std::ceil(S / 0.02)));
    return R / n;
}

} // namespace

SteadyPath build_path(const Nonlinearity& nl, double mu, int N, double R,
                      double tol) {
    check_common(mu, N, "build_path");
    if (!(R > 0.0)) throw ValidationError("build_path: radius must be positive");
    if (!(tol > 1e-4 && tol <= 1.0))
        throw ValidationError("build_path: tol must lie in (1e-4, 1]");
    auto cls = classify(nl);
    if (!cls.bistable())
        throw ValidationError("build_path: requires a bistable term");
    double theta = nl.theta();

    double h = path_step(mu, R);
    std::list<std::pair<double, RadialProfile>> entries;
    entries.emplace_back(0.0, integrate_radial(nl, 0.0, mu, N, R, h));
    entries.emplace_back(theta, integrate_radial(nl, theta, mu, N, R, h));
    refine_gaps(entries, nl, mu, N, R, h, tol);
    return assemble(std::move(entries));
}

SteadyPath path_to_minimal_barrier(const Nonlinearity& nl, double mu, int N,
                                   double R, double tol) {
    check_common(mu, N, "path_to_minimal_barrier");
    if (!(R > 0.0))
        throw ValidationError("path_to_minimal_barrier: radius must be positive");
    if (!(tol > 1e-4 && tol <= 1.0))
        throw ValidationError("path_to_minimal_barrier: tol must lie in (1e-4, 1]");
    auto cls = classify(nl);
    if (cls.variant != Variant::BistableF1Positive)
        throw ValidationError("path_to_minimal_barrier: requires bistable with F(1) > 0");

    auto barriers = find_barriers(nl, mu, N, R);
    if (barriers.empty())
        throw ValidationError(
            "path_to_minimal_barrier: no barrier exists at this diffusivity");
    double a_min = barriers.front().center_value;

    double theta = nl.theta();
    double h = path_step(mu, R);
    std::list<std::pair<double, RadialProfile>> entries;
    entries.emplace_back(0.0, integrate_radial(nl, 0.0, mu, N, R, h));
    entries.emplace_back(theta, integrate_radial(nl, theta, mu, N, R, h));
    entries.emplace_back(a_min, integrate_radial(nl, a_min, mu, N, R, h));
    refine_gaps(entries, nl, mu, N, R, h, tol);
    auto path = assemble(std::move(entries));
    if (std::abs(path.trace.back()) > 1e-6)
        throw NumericalError("path_to_minimal_barrier: terminal trace " +
                             std::to_string(path.trace.back()) +
                             " not within 1e-6 of zero");
    return path;
}

} // namespace rdc
