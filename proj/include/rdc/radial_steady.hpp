#pragma once

#include <optional>
#include <vector>

#include "rdc/nonlinearity.hpp"

namespace rdc {

// A steady state of the radial problem
//     u_rr + (N-1)/r u_r = -f(u)/mu,  u(0)=a,  u_r(0)=0
// sampled on a uniform grid over [0,R].
//
// mu is absorbed into the radius: integration runs in s = r/sqrt(mu), and v
// stores du/ds (= sqrt(mu) * u_r). In that variable energy(u,v) is
// non-increasing in r for N >= 2 and exactly conserved for N = 1, and the
// invariant region |v| <= sqrt(-2F(u)) holds for every mu; neither statement
// survives in the raw slope unless mu = 1. Physical slope: v / sqrt(mu).
struct RadialProfile {
    double center_value = 0.0;
    int dimension = 1;
    double mu = 1.0;
    double radius = 0.0;
    std::vector<double> r; // uniform, r.front() = 0, r.back() = R
    std::vector<double> u;
    std::vector<double> v;

    double trace() const { return u.back(); }
};

// Ordered family of profiles with ascending center values; for build_path the
// centers run 0 -> theta and the endpoints are the exact constants.
struct SteadyPath {
    std::vector<RadialProfile> profiles;
    std::vector<double> trace;     // u_k(R) per profile
    double continuity_bound = 0.0; // max consecutive sup-norm distance
};

// Nontrivial steady state with zero Dirichlet data: u > 0 on [0,R), u(R) = 0.
struct Barrier {
    RadialProfile profile;
    double center_value = 0.0;
    bool is_minimal = false; // smallest center value realizing u(R) = 0
};

struct LowerBound {
    double value = 0.0;
    bool applicable = false; // false when F(1) <= 0 makes the formula void
    double delta = 0.0;      // maximizing delta when applicable
};

// First Dirichlet-Laplacian eigenvalue domains.
struct Domain {
    enum class Kind { Interval, Ball } kind;
    double extent;  // Interval: length L; Ball: radius R
    int dimension;  // Ball only

    static Domain interval(double L) { return {Kind::Interval, L, 1}; }
    static Domain ball(int N, double R) { return {Kind::Ball, R, N}; }
};

// RK4 integration of the radial system; the first step from r = 0 uses the
// series u(h) = a - f(a) h^2/(2 N mu), avoiding the 1/r singularity.
// Requires a in [0,1] and h <= R/200; throws NumericalError if u leaves the
// evaluation window before reaching R.
RadialProfile integrate_radial(const Nonlinearity& nl, double a, double mu,
                               int N, double R, double h);

// Smallest r with u(r) = 0 for the profile shot from center value a, located
// by sign change plus bisection on RK4 dense output to 1e-8; none when no
// zero occurs before r_max = 100 sqrt(mu). Requires a in (0,1).
std::optional<double> first_zero_radius(const Nonlinearity& nl, double a,
                                        double mu, int N, double h);

// All centers a with first zero exactly at R, i.e. all nontrivial solutions
// of -mu (u_rr + (N-1)/r u_r) = f(u) with u(R) = 0 and 0 < u < 1, ascending
// by center value. Empty list when mu is above the existence threshold.
std::vector<Barrier> find_barriers(const Nonlinearity& nl, double mu, int N,
                                   double R);

// Numerical existence threshold: R^2 / (min_a rho(a; mu=1))^2, the inner
// minimum refined by golden-section search seeded from a 1e-3 scan.
double mu_star_numeric(const Nonlinearity& nl, int N, double R);

// Variational lower bound for the threshold on a domain of measure m,
// maximized over the admissible delta interval by golden-section to 1e-10.
LowerBound mu_star_lower_bound(const Nonlinearity& nl, int N, double measure);

// Eigenvalue upper bound (max_{s in (0,1]} f(s)/s) / lambda1.
double mu_star_upper_bound(const Nonlinearity& nl, double lambda1_value);

// Interval(L) -> (pi/L)^2; Ball(2,R) -> (j01/R)^2; Ball(3,R) -> (pi/R)^2;
// Ball(1,R) is the length-2R interval. Dimensions above 3 are unsupported.
double lambda1(const Domain& domain);

// Lebesgue measure of the N-ball of radius R (N=1: 2R).
double ball_measure(int N, double R);

// Admissible path of steady states from u=0 to u=theta: center values on an
// adaptive grid over [0, theta], bisected until consecutive profiles differ
// by at most tol in sup norm. tol in (1e-4, 1].
SteadyPath build_path(const Nonlinearity& nl, double mu, int N, double R,
                      double tol);

// Same path continued beyond theta up to the minimal barrier's center value;
// the last profile is the minimal barrier (trace 0 within 1e-6).
SteadyPath path_to_minimal_barrier(const Nonlinearity& nl, double mu, int N,
                                   double R, double tol);

// Sup-norm distance between profiles sampled on identical grids.
double sup_distance(const RadialProfile& p, const RadialProfile& q);

} // namespace rdc
