#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "rdc/radial_steady.hpp"

using namespace rdc;

namespace {

Nonlinearity cubic_third() { return Nonlinearity::cubic_bistable(1.0 / 3.0); }
Nonlinearity cubic_half() { return Nonlinearity::cubic_bistable(0.5); }

// Closed forms for the theta-cubic, local to the tests so oracles never call
// library code.
double fc(double th, double s) { return s * (1.0 - s) * (s - th); }
double Fc(double th, double s) {
    return s * s * (-th / 2.0 + (1.0 + th) * s / 3.0 - s * s / 4.0);
}

// 1-D time map: energy conservation gives the zero radius as a quadrature,
// rho = integral_0^a du / sqrt(2 (F(a) - F(u)) / mu), regularized at u = a by
// the substitution u = a - t^2.
double time_map_rho(double th, double a, double mu) {
    double Fa = Fc(th, a);
    auto g = [&](double t) {
        if (t < 1e-8) return std::sqrt(2.0 * mu / fc(th, a));
        double gap = Fa - Fc(th, a - t * t);
        return 2.0 * t / std::sqrt(2.0 * gap / mu);
    };
    return oracle::romberg(g, 0.0, std::sqrt(a), 1e-13);
}

// Independent shooting in scaled radius with the midpoint method; linear
// interpolation at the sign change. Used only as a cross-check oracle.
double rk2_zero_radius(double th, double a, int N, double ds, double s_cap) {
    double u = a, v = 0.0, s = 0.0;
    double fa = fc(th, a);
    double u1 = a - fa * ds * ds / (2.0 * N), v1 = -fa * ds / N;
    if (u1 <= 0.0) return ds; // not reached in practice
    u = u1;
    v = v1;
    s = ds;
    while (s < s_cap) {
        double du = v, dv = -(N - 1) / s * v - fc(th, u);
        double sm = s + 0.5 * ds;
        double um = u + 0.5 * ds * du, vm = v + 0.5 * ds * dv;
        double du2 = vm, dv2 = -(N - 1) / sm * vm - fc(th, um);
        double un = u + ds * du2, vn = v + ds * dv2;
        if (un <= 0.0) return s + ds * u / (u - un);
        u = un;
        v = vn;
        s += ds;
    }
    return std::numeric_limits<double>::infinity();
}

double theta1_of(const Nonlinearity& nl) { return *classify(nl).theta1; }

// Amplitudes of the maximal constant-sign runs of trace - theta, in order.
std::vector<double> run_amplitudes(const std::vector<double>& trace, double th) {
    std::vector<double> amps;
    int sign = 0;
    for (double t : trace) {
        double d = t - th;
        if (d == 0.0) continue;
        int s = d > 0.0 ? 1 : -1;
        if (s != sign) {
            amps.push_back(std::abs(d));
            sign = s;
        } else {
            amps.back() = std::max(amps.back(), std::abs(d));
        }
    }
    return amps;
}

} // namespace

TEST_CASE("first zero radius matches the one dimensional time map") {
    auto nl = cubic_third();
    for (double a : {0.6, 0.75, 0.9}) {
        for (double mu : {1.0, 0.37}) {
            auto rho = first_zero_radius(nl, a, mu, 1, 1e-4);
            REQUIRE(rho.has_value());
            double ref = time_map_rho(1.0 / 3.0, a, mu);
            CHECK(std::abs(*rho - ref) <= 1e-6);
        }
    }
    auto r99 = first_zero_radius(nl, 0.99, 1.0, 1, 1e-4);
    auto r90 = first_zero_radius(nl, 0.90, 1.0, 1, 1e-4);
    REQUIRE(r99.has_value());
    REQUIRE(r90.has_value());
    CHECK(*r99 > *r90);
    CHECK(time_map_rho(1.0 / 3.0, 0.99, 1.0) > time_map_rho(1.0 / 3.0, 0.9, 1.0));
    CHECK(std::abs(*r99 - time_map_rho(1.0 / 3.0, 0.99, 1.0)) <= 1e-6);
}

TEST_CASE("constant center values give exactly constant profiles") {
    auto nl = cubic_third();
    double th = nl.theta();
    auto pt = integrate_radial(nl, th, 1.0, 2, 10.0, 0.02);
    auto p0 = integrate_radial(nl, 0.0, 0.3, 3, 4.0, 0.01);
    CHECK(pt.u.size() == 501);
    CHECK(pt.r.front() == 0.0);
    CHECK(pt.r.back() == 10.0);
    for (std::size_t i = 0; i < pt.u.size(); ++i) {
        CHECK(pt.u[i] == th);
        CHECK(pt.v[i] == 0.0);
    }
    for (std::size_t i = 0; i < p0.u.size(); ++i) {
        CHECK(p0.u[i] == 0.0);
        CHECK(p0.v[i] == 0.0);
    }
}

TEST_CASE("endpoint converges under step refinement") {
    auto nl = cubic_third();
    auto coarse = integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.02);
    auto ref = integrate_radial(nl, 0.3, 1.0, 2, 10.0, 1e-4);
    CHECK(std::abs(coarse.trace() - ref.trace()) <= 1e-6);
}

TEST_CASE("energy dissipates for N >= 2 across random profiles") {
    auto nl = cubic_third();
    oracle::Rng rng(2024);
    for (int it = 0; it < 200; ++it) {
        double a = rng.uniform(0.0, 1.0 - 1e-9);
        int N = rng.pick(2, 3);
        double mu = rng.uniform(0.05, 2.0);
        auto p = integrate_radial(nl, a, mu, N, 1.0, 1.0 / 800.0);
        double violation = 0.0;
        for (std::size_t i = 0; i + 1 < p.u.size(); ++i) {
            double de = energy(nl, p.u[i + 1], p.v[i + 1]) -
                        energy(nl, p.u[i], p.v[i]);
            CHECK(de <= 1e-9);
            violation += std::max(0.0, de);
        }
        CHECK(violation <= 1e-6);
    }
}

TEST_CASE("energy is conserved for N = 1") {
    auto nl = cubic_third();
    oracle::Rng rng(77);
    for (int it = 0; it < 100; ++it) {
        double a = rng.uniform(0.0, 1.0 - 1e-9);
        double mu = rng.uniform(0.05, 2.0);
        auto p = integrate_radial(nl, a, mu, 1, 1.0, 1.0 / 800.0);
        double e0 = energy(nl, a, 0.0);
        for (std::size_t i = 0; i < p.u.size(); ++i)
            CHECK(std::abs(energy(nl, p.u[i], p.v[i]) - e0) <= 1e-8);
    }
}

TEST_CASE("profiles started inside the invariant region stay inside") {
    auto nl = cubic_third();
    double th1 = theta1_of(nl);
    oracle::Rng rng(13);
    for (int it = 0; it < 100; ++it) {
        double a = rng.uniform(0.0, th1);
        int N = rng.pick(1, 3);
        double mu = rng.uniform(0.05, 2.0);
        auto p = integrate_radial(nl, a, mu, N, 2.0, 1.0 / 400.0);
        for (std::size_t i = 0; i < p.u.size(); ++i) {
            CHECK(p.u[i] >= -1e-9);
            CHECK(p.u[i] <= th1 + 1e-9);
            double half = std::sqrt(std::max(0.0, -2.0 * eval_F_extended(nl, p.u[i])));
            CHECK(std::abs(p.v[i]) <= half + 1e-6);
        }
    }
}

TEST_CASE("profiles depend continuously on the center value") {
    auto nl = cubic_third();
    double L = nl.lipschitz();
    double R = 5.0, h = 0.005;
    for (double mu : {1.0, 4.0}) {
        double bound_rate = std::exp((1.0 + L) * R / 2.0);
        for (int N : {1, 2, 3}) {
            for (double a : {0.05, 0.2, 0.4, 0.52, 0.7, 0.9}) {
                for (double da : {1e-3, 2.5e-4}) {
                    auto p = integrate_radial(nl, a, mu, N, R, h);
                    auto q = integrate_radial(nl, a + da, mu, N, R, h);
                    CHECK(sup_distance(p, q) <= bound_rate * da);
                }
            }
        }
    }
}

TEST_CASE("quartering mu halves every radius bitwise") {
    auto nl = cubic_third();
    auto p = integrate_radial(nl, 0.3, 0.25, 2, 5.0, 0.005);
    auto q = integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.01);
    REQUIRE(p.u.size() == q.u.size());
    for (std::size_t i = 0; i < p.u.size(); ++i) {
        CHECK(p.u[i] == q.u[i]);
        CHECK(p.v[i] == q.v[i]);
        CHECK(p.r[i] == 0.5 * q.r[i]);
    }

    auto z25 = first_zero_radius(nl, 0.75, 0.25, 1, 0.005);
    auto z1 = first_zero_radius(nl, 0.75, 1.0, 1, 0.01);
    REQUIRE(z25.has_value());
    REQUIRE(z1.has_value());
    CHECK(*z25 == 0.5 * *z1);

    double m1 = mu_star_numeric(nl, 2, 10.0);
    double m2 = mu_star_numeric(nl, 2, 20.0);
    CHECK(m2 == doctest::Approx(4.0 * m1).epsilon(1e-12));
}

TEST_CASE("barrier search on forced examples") {
    auto nl = cubic_third();
    double th1 = theta1_of(nl);

    // Above the eigenvalue bound for the length-2 interval no barrier exists.
    CHECK(find_barriers(nl, 0.05, 1, 1.0).empty());

    // Below the variational lower bound at least one barrier must appear.
    auto bs = find_barriers(nl, 0.001, 1, 1.0);
    REQUIRE(!bs.empty());
    CHECK(bs.front().is_minimal);
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
        CHECK(bs[k].center_value < bs[k + 1].center_value);
        CHECK(!bs[k + 1].is_minimal);
    }
    for (const auto& b : bs) {
        CHECK(b.center_value > th1 - 2e-9); // th1 itself is resolved to 1e-10
        CHECK(b.center_value < 1.0);
        CHECK(std::abs(b.profile.trace()) <= 1e-6);
        double umax = *std::max_element(b.profile.u.begin(), b.profile.u.end());
        CHECK(umax > 1.0 / 3.0);
        for (std::size_t i = 0; i + 1 < b.profile.u.size(); ++i)
            CHECK(b.profile.u[i] > 0.0);
    }

    // Balanced wells: zero Dirichlet data only supports the trivial state.
    CHECK(find_barriers(cubic_half(), 0.01, 2, 5.0).empty());
    CHECK(find_barriers(cubic_half(), 1e-4, 1, 1.0).empty());
}

TEST_CASE("delta-optimized lower bound hits the closed form") {
    auto nl = cubic_third();
    double F1 = Fc(1.0 / 3.0, 1.0), Ft = Fc(1.0 / 3.0, 1.0 / 3.0);

    auto lb = mu_star_lower_bound(nl, 1, 1.0);
    CHECK(lb.applicable);
    CHECK(std::abs(lb.value - F1 * F1 / (8.0 * (F1 - Ft))) <= 1e-10);
    CHECK(std::abs(lb.value - 0.0029296875) <= 1e-10);
    CHECK(std::abs(lb.delta - F1 / (2.0 * (F1 - Ft))) <= 1e-8);

    // Quadratic scaling in the measure.
    auto lb2m = mu_star_lower_bound(nl, 1, 2.0);
    CHECK(std::abs(lb2m.value - 4.0 * lb.value) <= 1e-9);

    auto flat = mu_star_lower_bound(cubic_half(), 2, 1.0);
    CHECK(!flat.applicable);
    CHECK(flat.value == 0.0);

    CHECK_THROWS_AS(mu_star_lower_bound(Nonlinearity::logistic(), 1, 1.0),
                    ValidationError);

    // N = 2: maximize the same expression on a dense delta grid.
    auto lbd = mu_star_lower_bound(nl, 2, 1.0);
    double dmax = 1.0 - std::sqrt(-Ft / (F1 - Ft));
    double gp = std::tgamma(2.0); // Gamma(N/2+1), N=2
    double best = 0.0, best_d = 0.0;
    for (double d = 1e-6; d < dmax; d += 1e-6) {
        double w = (1.0 - d) * (1.0 - d);
        double val = 2.0 * d * d * gp * (Ft + w * (F1 - Ft)) /
                     (std::numbers::pi * (1.0 - w));
        if (val > best) {
            best = val;
            best_d = d;
        }
    }
    CHECK(std::abs(lbd.value - best) <= 1e-9);
    CHECK(std::abs(lbd.delta - best_d) <= 1e-5);
    CHECK(std::abs(lbd.value - 0.00123646) <= 1e-7);
}

TEST_CASE("eigenvalue quotient upper bound") {
    auto nl = cubic_third();
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(mu_star_upper_bound(nl, pi2) - (1.0 / 9.0) / pi2) <= 1e-12);
    CHECK(std::abs(mu_star_upper_bound(nl, pi2) - 0.0112579) <= 1e-7);
    CHECK(std::abs(mu_star_upper_bound(nl, lambda1(Domain::ball(2, 1.0))) -
                   0.0192128) <= 1e-7);
    CHECK(std::abs(mu_star_upper_bound(Nonlinearity::logistic(), 2.5) - 0.4) <=
          1e-12);
    CHECK_THROWS_AS(mu_star_upper_bound(nl, 0.0), ValidationError);
}

TEST_CASE("eigenvalues and measures of intervals and balls") {
    const double pi = std::numbers::pi;
    CHECK(lambda1(Domain::interval(1.0)) == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(lambda1(Domain::ball(1, 1.5)) == lambda1(Domain::interval(3.0)));
    CHECK(std::abs(lambda1(Domain::ball(2, 1.0)) - 5.7831859629467) <= 1e-9);
    CHECK(lambda1(Domain::ball(3, 2.0)) ==
          doctest::Approx(pi * pi / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(lambda1(Domain::ball(4, 1.0)), ValidationError);
    CHECK_THROWS_AS(lambda1(Domain::interval(0.0)), ValidationError);
    CHECK_THROWS_AS(lambda1(Domain::ball(2, -1.0)), ValidationError);

    CHECK(ball_measure(1, 3.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(ball_measure(2, 2.0) == doctest::Approx(4.0 * pi).epsilon(1e-14));
    CHECK(ball_measure(3, 1.0) ==
          doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(ball_measure(0, 1.0), ValidationError);
    CHECK_THROWS_AS(ball_measure(2, 0.0), ValidationError);
}

TEST_CASE("numeric threshold sits between the analytic bounds") {
    auto nl = cubic_third();

    // Interval of unit length (half-length 0.5, measure 1).
    double ms_int = mu_star_numeric(nl, 1, 0.5);
    double lo_int = mu_star_lower_bound(nl, 1, 1.0).value;
    double hi_int = mu_star_upper_bound(nl, lambda1(Domain::interval(1.0)));
    CHECK(lo_int <= ms_int);
    CHECK(ms_int <= hi_int);
    CHECK(std::abs(ms_int - 0.009179415541645515) <= 1e-7);

    // Disk of unit measure.
    double Rd = 1.0 / std::sqrt(std::numbers::pi);
    double ms_disk = mu_star_numeric(nl, 2, Rd);
    double lo_disk = mu_star_lower_bound(nl, 2, 1.0).value;
    double hi_disk = mu_star_upper_bound(nl, lambda1(Domain::ball(2, Rd)));
    CHECK(lo_disk <= ms_disk);
    CHECK(ms_disk <= hi_disk);
    CHECK(std::abs(ms_disk - 0.003714237) <= 5e-6);
}

TEST_CASE("numeric threshold for the unit-measure disk vs dense scan") {
    auto nl = cubic_third();
    double th1 = theta1_of(nl);
    double Rd = 1.0 / std::sqrt(std::numbers::pi);

    // Independent oracle: midpoint-method shooting on a 1e-3 center grid at
    // ds = 1e-4, then a parabola through the three best points.
    double b_rho = std::numeric_limits<double>::infinity();
    double b_a = 0.0;
    std::vector<double> as, rhos;
    for (double a = th1 + 1e-3; a < 1.0; a += 1e-3) {
        double rho = rk2_zero_radius(1.0 / 3.0, a, 2, 1e-4, 12.0);
        as.push_back(a);
        rhos.push_back(rho);
        if (rho < b_rho) {
            b_rho = rho;
            b_a = a;
        }
    }
    REQUIRE(std::isfinite(b_rho));
    std::size_t bi = static_cast<std::size_t>(
        std::min_element(rhos.begin(), rhos.end()) - rhos.begin());
    REQUIRE(bi > 0);
    REQUIRE(bi + 1 < rhos.size());
    double y0 = rhos[bi - 1], y1 = rhos[bi], y2 = rhos[bi + 1];
    double denom = y0 - 2.0 * y1 + y2;
    REQUIRE(denom > 0.0);
    double shift = 0.5 * (y0 - y2) / denom; // in units of the 1e-3 grid
    double rho_min = y1 - 0.125 * (y0 - y2) * (y0 - y2) / denom;
    double mu_oracle = (Rd / rho_min) * (Rd / rho_min);
    CHECK(std::abs(shift) <= 1.0);
    CHECK(std::abs(b_a - as[bi]) <= 1e-12);

    double ms = mu_star_numeric(nl, 2, Rd);
    CHECK(std::abs(ms - mu_oracle) / ms <= 1e-6);

    CHECK_THROWS_AS(mu_star_numeric(cubic_half(), 2, 1.0), ValidationError);
}

TEST_CASE("steady path construction") {
    auto nl = cubic_third();
    double th = nl.theta();

    auto trivial = build_path(nl, 1.0, 2, 10.0, 1.0);
    REQUIRE(trivial.profiles.size() == 2);
    for (double x : trivial.profiles.front().u) CHECK(x == 0.0);
    for (double x : trivial.profiles.back().u) CHECK(x == th);
    CHECK(trivial.trace.front() == 0.0);
    CHECK(trivial.trace.back() == th);
    CHECK(trivial.continuity_bound == doctest::Approx(th).epsilon(1e-15));

    CHECK_THROWS_AS(build_path(nl, 1.0, 2, 10.0, 1e-5), ValidationError);
    CHECK_THROWS_AS(build_path(nl, 1.0, 2, 10.0, 1.5), ValidationError);
    CHECK_THROWS_AS(build_path(Nonlinearity::logistic(), 1.0, 2, 10.0, 0.02),
                    ValidationError);

    auto path = build_path(nl, 1.0, 2, 10.0, 0.02);
    REQUIRE(path.profiles.size() >= 3);
    CHECK(path.continuity_bound <= 0.02);
    CHECK(path.profiles.front().center_value == 0.0);
    CHECK(path.profiles.back().center_value == th);
    for (std::size_t k = 0; k + 1 < path.profiles.size(); ++k)
        CHECK(path.profiles[k].center_value < path.profiles[k + 1].center_value);
    for (double x : path.profiles.front().u) CHECK(std::abs(x) <= 1e-10);
    for (double x : path.profiles.back().u) CHECK(std::abs(x - th) <= 1e-10);
    for (const auto& p : path.profiles)
        for (double x : p.u) {
            CHECK(x >= -1e-9);
            CHECK(x <= 1.0 + 1e-9);
        }
    for (double t : path.trace) {
        CHECK(t >= 0.0);
        CHECK(t < 1.0);
    }

    auto amps = run_amplitudes(path.trace, th);
    REQUIRE(amps.size() >= 2);
    for (std::size_t k = 0; k + 1 < amps.size(); ++k)
        CHECK(amps[k + 1] < amps[k]);

    // Without radial damping the trace swings wider.
    auto path1 = build_path(nl, 1.0, 1, 10.0, 0.02);
    CHECK(path1.continuity_bound <= 0.02);
    auto tail_dev = [&](const SteadyPath& sp) {
        double m = 0.0;
        for (std::size_t k = 0; k < sp.profiles.size(); ++k)
            if (sp.profiles[k].center_value > 0.05)
                m = std::max(m, std::abs(sp.trace[k] - th));
        return m;
    };
    CHECK(tail_dev(path1) > tail_dev(path));
}

TEST_CASE("path continues to the minimal barrier") {
    auto nl = cubic_third();
    double th = nl.theta();
    double th1 = theta1_of(nl);

    double ms = mu_star_numeric(nl, 2, 10.0);
    CHECK(std::abs(ms - 1.1668620702185386) <= 1e-4);
    double mu = 0.5 * ms;

    auto path = path_to_minimal_barrier(nl, mu, 2, 10.0, 0.02);
    REQUIRE(path.profiles.size() >= 3);
    CHECK(path.continuity_bound <= 0.02);
    CHECK(path.profiles.front().center_value == 0.0);
    CHECK(std::abs(path.trace.back()) <= 1e-6);
    for (std::size_t k = 0; k + 1 < path.profiles.size(); ++k)
        CHECK(path.profiles[k].center_value < path.profiles[k + 1].center_value);

    // The continuation beyond theta ends at the minimal barrier.
    auto barriers = find_barriers(nl, mu, 2, 10.0);
    REQUIRE(!barriers.empty());
    CHECK(path.profiles.back().center_value ==
          doctest::Approx(barriers.front().center_value).epsilon(1e-12));
    double umax = *std::max_element(path.profiles.back().u.begin(),
                                    path.profiles.back().u.end());
    CHECK(umax > th);

    // Terminal trace decreases monotonically to zero near the barrier.
    std::size_t n = path.trace.size();
    for (std::size_t k = n - 10; k + 1 < n; ++k)
        CHECK(path.trace[k + 1] <= path.trace[k] + 1e-12);

    // Center values beyond theta1 carry positive energy at r = 0.
    bool seen_beyond = false;
    for (const auto& p : path.profiles)
        if (p.center_value > th1 + 1e-9) {
            seen_beyond = true;
            CHECK(eval_F(nl, p.center_value) > 0.0);
        }
    CHECK(seen_beyond);

    CHECK_THROWS_AS(path_to_minimal_barrier(cubic_half(), 0.01, 2, 10.0, 0.02),
                    ValidationError);
    CHECK_THROWS_AS(path_to_minimal_barrier(nl, 2.0, 2, 10.0, 0.02),
                    ValidationError);
}

TEST_CASE("malformed inputs are rejected") {
    auto nl = cubic_third();
    CHECK_THROWS_AS(integrate_radial(nl, -0.01, 1.0, 2, 10.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 1.01, 1.0, 2, 10.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, 0.0, 2, 10.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, -1.0, 2, 10.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, 1.0, 0, 10.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, 1.0, 2, 0.0, 0.01),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.1),
                    ValidationError);
    CHECK_THROWS_AS(first_zero_radius(nl, 0.0, 1.0, 1, 0.01), ValidationError);
    CHECK_THROWS_AS(first_zero_radius(nl, 1.0, 1.0, 1, 0.01), ValidationError);
    CHECK_THROWS_AS(first_zero_radius(nl, 0.5, 1.0, 1, 0.0), ValidationError);
    CHECK_THROWS_AS(mu_star_numeric(nl, 0, 1.0), ValidationError);

    auto p = integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.02);
    auto q = integrate_radial(nl, 0.3, 1.0, 2, 10.0, 0.01);
    CHECK_THROWS_AS(sup_distance(p, q), ValidationError);

    // A center close to 1 at tiny mu crosses zero fast and keeps falling.
    CHECK_THROWS_AS(integrate_radial(nl, 0.95, 0.001, 1, 1.0, 0.003),
                    NumericalError);
}

TEST_CASE("profiles below theta1 never reach zero") {
    auto nl = cubic_third();
    CHECK(!first_zero_radius(nl, 0.3, 1.0, 2, 0.01).has_value());
    CHECK(!first_zero_radius(nl, 0.5, 1.0, 2, 0.01).has_value());
    // Just above theta1 the zero exists for N = 1 once F(a) > 0 and the
    // domain is long enough; within the cutoff it may still be absent, so
    // only the invariant-region side is asserted here.
}
