#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rdc/nonlinearity.hpp"

using namespace rdc;

namespace {

Nonlinearity cubic_third() { return Nonlinearity::cubic_bistable(1.0 / 3.0); }

// Custom built by sampling the theta=1/3 cubic on 501 points.
Nonlinearity sampled_cubic(int n = 501) {
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) {
        double s = static_cast<double>(i) / (n - 1);
        samples[i] = s * (1.0 - s) * (s - 1.0 / 3.0);
    }
    return Nonlinearity::custom(samples, 1.05);
}

} // namespace

TEST_CASE("cubic evaluates exactly") {
    auto nl = cubic_third();
    CHECK(std::abs(eval_f(nl, 1.0 / 3.0)) <= 1e-15);
    CHECK(eval_f(nl, 0.5) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(eval_f(nl, 0.0) == 0.0);
    CHECK(eval_f(nl, 1.0) == doctest::Approx(0.0).scale(1));
    CHECK(eval_f(Nonlinearity::logistic(), 1.0) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("primitive closed forms") {
    auto nl = cubic_third();
    CHECK(eval_F(nl, 0.0) == 0.0);
    CHECK(eval_F(nl, 1.0) == doctest::Approx(1.0 / 36.0).epsilon(1e-14));
    CHECK(eval_F(nl, 1.0 / 3.0) == doctest::Approx(-5.0 / 972.0).epsilon(1e-13));
}

TEST_CASE("primitive agrees with independent quadrature") {
    oracle::Rng rng(20260816);
    std::vector<Nonlinearity> kinds;
    kinds.push_back(cubic_third());
    kinds.push_back(Nonlinearity::cubic_bistable(0.4));
    kinds.push_back(Nonlinearity::logistic());
    for (const auto& nl : kinds) {
        for (int i = 0; i < 1000; ++i) {
            double s = rng.uniform(0.0, 1.0);
            double ref = oracle::romberg([&](double x) { return eval_f(nl, x); }, 0.0, s);
            CHECK(std::abs(eval_F(nl, s) - ref) <= 1e-10);
        }
    }
    // Custom integrates its interpolant numerically; looser bound.
    auto cus = sampled_cubic();
    for (int i = 0; i < 200; ++i) {
        double s = rng.uniform(0.0, 1.0);
        double ref = oracle::romberg([&](double x) { return eval_f(cus, x); }, 0.0, s);
        CHECK(std::abs(eval_F(cus, s) - ref) <= 5e-9);
    }
}

TEST_CASE("classification of the cubic family") {
    auto c13 = classify(cubic_third());
    CHECK(c13.variant == Variant::BistableF1Positive);
    CHECK(c13.F1 == doctest::Approx(1.0 / 36.0).epsilon(1e-14));
    CHECK(*c13.Ftheta == doctest::Approx(-5.0 / 972.0).epsilon(1e-13));
    // positive root of 9 s^2 - 16 s + 6 = 0
    double theta1_exact = (8.0 - std::sqrt(10.0)) / 9.0;
    CHECK(*c13.theta1 == doctest::Approx(theta1_exact).epsilon(1e-9));
    CHECK(*c13.theta1 == doctest::Approx(0.537524).epsilon(1e-6));

    auto c12 = classify(Nonlinearity::cubic_bistable(0.5));
    CHECK(c12.variant == Variant::BistableF1Zero);
    CHECK(std::abs(c12.F1) <= 1e-12);
    CHECK(*c12.theta1 == 1.0);

    CHECK(classify(Nonlinearity::logistic()).variant == Variant::Monostable);

    // theta > 1/2 makes F(1) < 0; the variant enum has no such case.
    CHECK_THROWS_AS(classify(Nonlinearity::cubic_bistable(0.6)), ValidationError);
}

TEST_CASE("classification is internally consistent") {
    for (double th : {0.2, 1.0 / 3.0, 0.45}) {
        auto nl = Nonlinearity::cubic_bistable(th);
        auto cls = classify(nl);
        REQUIRE(cls.theta1.has_value());
        CHECK(std::abs(eval_F(nl, *cls.theta1)) <= 1e-9);
        CHECK(eval_F(nl, *cls.theta1 / 2.0) < 0.0);
        CHECK(*cls.theta1 > th);
        CHECK(*cls.theta1 <= 1.0);
    }
}

TEST_CASE("custom nonlinearity tracks its samples") {
    auto nl = sampled_cubic();
    auto exact = cubic_third();
    for (int i = 0; i <= 200; ++i) {
        double s = static_cast<double>(i) / 200.0;
        CHECK(std::abs(eval_f(nl, s) - eval_f(exact, s)) <= 1e-7);
    }
    auto cls = classify(nl);
    CHECK(cls.variant == Variant::BistableF1Positive);
    CHECK(nl.theta() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(*cls.theta1 == doctest::Approx((8.0 - std::sqrt(10.0)) / 9.0).epsilon(1e-5));

    std::vector<double> logistic_samples(301);
    for (int i = 0; i <= 300; ++i) {
        double s = static_cast<double>(i) / 300.0;
        logistic_samples[i] = s * (1.0 - s);
    }
    auto mono = Nonlinearity::custom(logistic_samples, 1.3);
    CHECK(classify(mono).variant == Variant::Monostable);
    CHECK(!mono.has_theta());
}

TEST_CASE("custom construction validates") {
    std::vector<double> bad_end(101, 0.0);
    bad_end[100] = 0.2;
    CHECK_THROWS_AS(Nonlinearity::custom(bad_end, 1.0), ValidationError);

    std::vector<double> cubic(101);
    for (int i = 0; i <= 100; ++i) {
        double s = i / 100.0;
        cubic[i] = s * (1.0 - s) * (s - 1.0 / 3.0);
    }
    CHECK_THROWS_AS(Nonlinearity::custom(cubic, 0.01), ValidationError); // L too small
    CHECK_NOTHROW(Nonlinearity::custom(cubic, 1.2));
}

TEST_CASE("lipschitz bound dominates finite-difference slopes") {
    for (const auto& nl : {cubic_third(), Nonlinearity::logistic(), sampled_cubic()}) {
        double sup = 0.0;
        double prev = eval_f_extended(nl, -0.1);
        for (int k = 1; k <= 1200; ++k) {
            double s = -0.1 + 1e-3 * k;
            double cur = eval_f_extended(nl, s);
            sup = std::max(sup, std::abs(cur - prev) / 1e-3);
            prev = cur;
        }
        CHECK(nl.lipschitz() >= sup * (1.0 - 1e-12));
    }
}

TEST_CASE("energy combines kinetic and primitive parts") {
    auto nl = cubic_third();
    CHECK(energy(nl, 0.0, 0.0) == 0.0);
    CHECK(energy(nl, 1.0 / 3.0, 0.0) == doctest::Approx(-5.0 / 972.0).epsilon(1e-13));
    CHECK(energy(nl, 0.2, 0.1) == doctest::Approx(0.0014889).epsilon(1e-4));
    CHECK(energy(nl, 0.2, 0.1) ==
          doctest::Approx(0.005 + eval_F(nl, 0.2)).epsilon(1e-15));
}

TEST_CASE("region halfwidth") {
    auto nl = cubic_third();
    double theta1 = *classify(nl).theta1;
    CHECK(region_halfwidth(nl, 0.0) == 0.0);
    CHECK(region_halfwidth(nl, theta1) <= 5e-6); // theta1 carries 1e-10 bisection error
    CHECK(region_halfwidth(nl, 1.0 / 3.0) ==
          doctest::Approx(std::sqrt(10.0 / 972.0)).epsilon(1e-12));
    CHECK(region_halfwidth(nl, 1.0 / 3.0) == doctest::Approx(0.101431).epsilon(1e-5));
    CHECK_THROWS_AS(region_halfwidth(nl, theta1 + 0.05), ValidationError);
    CHECK_THROWS_AS(region_halfwidth(Nonlinearity::logistic(), 0.2), ValidationError);
}

TEST_CASE("region halfwidth has a loose continuity modulus") {
    auto nl = cubic_third();
    double theta1 = *classify(nl).theta1;
    double prev = region_halfwidth(nl, 0.0);
    for (double u = 1e-3; u <= theta1; u += 1e-3) {
        double cur = region_halfwidth(nl, u);
        CHECK(std::abs(cur - prev) <= nl.lipschitz() * 1e-2);
        prev = cur;
    }
}

TEST_CASE("evaluation window is enforced and extended") {
    auto nl = cubic_third();
    CHECK_THROWS_AS(eval_f(nl, 1.2), ValidationError);
    CHECK_THROWS_AS(eval_f(nl, -0.2), ValidationError);
    CHECK_THROWS_AS(eval_F(nl, 1.11), ValidationError);
    CHECK_THROWS_AS(energy(nl, -0.11, 0.0), ValidationError);
    CHECK_NOTHROW(eval_f(nl, 1.1));
    CHECK_NOTHROW(eval_f(nl, -0.1));

    // C1 continuation at the window edges.
    double d = 1e-6;
    CHECK(eval_f_extended(nl, 1.1 + d) ==
          doctest::Approx(eval_f(nl, 1.1) + eval_df(nl, 1.1) * d).epsilon(1e-12));
    CHECK(eval_f_extended(nl, -0.1 - d) ==
          doctest::Approx(eval_f(nl, -0.1) - eval_df(nl, -0.1) * d).epsilon(1e-12));
    // Far outside the window the slope stays frozen (linear growth).
    double far = eval_f_extended(nl, 3.0);
    CHECK(far == doctest::Approx(eval_f(nl, 1.1) + eval_df(nl, 1.1) * 1.9).epsilon(1e-12));
}

TEST_CASE("derivative matches finite differences") {
    oracle::Rng rng(7);
    for (const auto& nl : {cubic_third(), Nonlinearity::logistic()}) {
        for (int i = 0; i < 100; ++i) {
            double s = rng.uniform(0.0, 1.0);
            double d = 1e-6;
            double fd = (eval_f(nl, s + d) - eval_f(nl, s - d)) / (2.0 * d);
            CHECK(eval_df(nl, s) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("json round trip") {
    auto a = cubic_third();
    auto b = Nonlinearity::from_json(a.to_json());
    CHECK(b.kind() == NonlinearityKind::CubicBistable);
    CHECK(b.theta() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    auto l = Nonlinearity::from_json(Nonlinearity::logistic().to_json());
    CHECK(l.kind() == NonlinearityKind::Logistic);

    auto c = Nonlinearity::from_json(sampled_cubic().to_json());
    CHECK(c.kind() == NonlinearityKind::Custom);
    CHECK(eval_f(c, 0.5) == doctest::Approx(eval_f(sampled_cubic(), 0.5)).epsilon(1e-14));

    CHECK_THROWS_AS(Nonlinearity::from_json("{"), ValidationError);
    CHECK_THROWS_AS(Nonlinearity::from_json("{\"kind\":\"exp\"}"), ValidationError);
    CHECK_THROWS_AS(Nonlinearity::from_json("{\"kind\":\"cubic_bistable\"}"),
                    ValidationError);
}

TEST_CASE("constructor argument validation") {
    CHECK_THROWS_AS(Nonlinearity::cubic_bistable(0.0), ValidationError);
    CHECK_THROWS_AS(Nonlinearity::cubic_bistable(1.0), ValidationError);
    CHECK_THROWS_AS(Nonlinearity::logistic().theta(), ValidationError);
}
