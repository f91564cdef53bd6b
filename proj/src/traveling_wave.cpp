#include "rdc/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdc {

namespace {

constexpr double kManifoldOffset = 1e-8; // departure from the (1,0) saddle
constexpr double kBallSq = 1e-10;        // connection ball radius 1e-5, squared

enum class Shot { Connected, TooSlow, TooFast };

struct PhaseState {
    double u, v;
};

PhaseState phase_rhs(const Nonlinearity& nl, double mu, double c, PhaseState y) {
    return {y.v, -(c * y.v + eval_f_extended(nl, y.u)) / mu};
}

PhaseState phase_rk4(const Nonlinearity& nl, double mu, double c, PhaseState y,
                     double h) {
    PhaseState k1 = phase_rhs(nl, mu, c, y);
    PhaseState k2 = phase_rhs(nl, mu, c, {y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v});
    PhaseState k3 = phase_rhs(nl, mu, c, {y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v});
    PhaseState k4 = phase_rhs(nl, mu, c, {y.u + h * k3.u, y.v + h * k3.v});
    return {y.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
            y.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

// One shot at speed c. When out is non-null the U samples (uniform in xi,
// spacing h) are collected, starting at the manifold offset point.
Shot shoot(const Nonlinearity& nl, double mu, double c, double h,
           std::vector<double>* out) {
    double df1 = eval_df(nl, 1.0);
    if (df1 >= -1e-12)
        throw NumericalError("wave_speed: no unstable direction at u = 1");
    double lam = (-c + std::sqrt(c * c - 4.0 * mu * df1)) / (2.0 * mu);
    PhaseState y{1.0 - kManifoldOffset, -kManifoldOffset * lam};
    if (out) {
        out->clear();
        out->push_back(y.u);
    }
    // At c far from the front speed the crawl time is set by c/f, not by the
    // diffusive scale, so the cap must not shrink with mu.
    const double cap = 2000.0 * std::max(1.0, std::sqrt(mu));
    double xi = 0.0;
    while (xi < cap) {
        y = phase_rk4(nl, mu, c, y, h);
        xi += h;
        if (out) out->push_back(y.u);
        if (y.u * y.u + y.v * y.v <= kBallSq) return Shot::Connected;
        if (y.u <= 0.0) return Shot::TooSlow;
        if (y.v >= 0.0 && y.u > 1e-5) return Shot::TooFast;
        // Fast fronts can sink into the interior equilibrium with v < 0
        // throughout; a stalled state that has left the u = 1 saddle but sits
        // far from the origin means the same. On a connecting orbit
        // |v| + |f| stays above this threshold until inside the ball.
        if (y.u > 1e-5 && y.u < 0.9 &&
            std::abs(y.v) + std::abs(eval_f_extended(nl, y.u)) <= 1e-8)
            return Shot::TooFast;
    }
    throw NumericalError("wave_speed: trajectory exceeded the xi cap at c = " +
                         std::to_string(c));
}

double bisect_speed(const Nonlinearity& nl, double mu, double h) {
    double lo = -5.0, hi = 5.0;
    if (shoot(nl, mu, lo, h, nullptr) != Shot::TooSlow ||
        shoot(nl, mu, hi, h, nullptr) != Shot::TooFast)
        throw NumericalError("wave_speed: no bisection bracket in c within [-5, 5]");
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        Shot s = shoot(nl, mu, mid, h, nullptr);
        if (s == Shot::Connected) return mid;
        (s == Shot::TooSlow ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double require_positive_mu(double mu, const char* what) {
    if (!(mu > 0.0)) throw ValidationError(std::string(what) + ": mu must be positive");
    return std::sqrt(mu);
}

} // namespace

double wave_speed(const Nonlinearity& nl, double mu) {
    double sq = require_positive_mu(mu, "wave_speed");
    auto cls = classify(nl);
    double h = sq * 5e-3;
    if (cls.variant == Variant::Monostable) {
        double c = 2.0 * std::sqrt(mu * std::max(0.0, eval_df_extended(nl, 0.0)));
        if (shoot(nl, mu, c, h, nullptr) != Shot::Connected)
            throw NumericalError(
                "wave_speed: pulled-front speed failed the connection check");
        return c;
    }
    return bisect_speed(nl, mu, h);
}

WaveSolution wave_profile(const Nonlinearity& nl, double mu, int max_samples) {
    double sq = require_positive_mu(mu, "wave_profile");
    if (max_samples < 9)
        throw ValidationError("wave_profile: need at least 9 samples");
    auto cls = classify(nl);
    if (cls.variant == Variant::BistableF1Zero)
        return stationary_profile(nl, mu, max_samples);

    double h = sq * 5e-3;
    double c = (cls.variant == Variant::Monostable)
                   ? wave_speed(nl, mu)
                   : bisect_speed(nl, mu, h);
    std::vector<double> samples;
    Shot final_shot = shoot(nl, mu, c, h, &samples);
    // At the converged speed the trajectory tracks the connection until an
    // event in the 1e-5 / 1e-4 neighborhood of the origin fires; any of the
    // three outcomes leaves a valid profile, possibly with a stray terminal
    // point just past u = 0.
    if (final_shot == Shot::TooSlow && samples.back() < 0.0) samples.pop_back();

    int stride = 1 + (static_cast<int>(samples.size()) - 1) / max_samples;
    std::vector<double> u;
    for (std::size_t i = 0; i < samples.size(); i += stride)
        u.push_back(samples[i]);

    // Fractional shift putting the half level at xi = 0.
    double hs = h * stride;
    double cross = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
        if (u[i] >= 0.5 && u[i + 1] < 0.5) {
            cross = hs * (i + (u[i] - 0.5) / (u[i] - u[i + 1]));
            break;
        }
    WaveSolution w;
    w.speed = c;
    w.mu = mu;
    w.u = std::move(u);
    w.xi.reserve(w.u.size());
    for (std::size_t i = 0; i < w.u.size(); ++i)
        w.xi.push_back(hs * static_cast<double>(i) - cross);
    return w;
}

WaveSolution stationary_profile(const Nonlinearity& nl, double mu, int n) {
    require_positive_mu(mu, "stationary_profile");
    if (n < 9) throw ValidationError("stationary_profile: need n >= 9");
    auto cls = classify(nl);
    if (cls.variant != Variant::BistableF1Zero)
        throw ValidationError("stationary_profile: requires a balanced well, F(1) = 0");

    auto dxi_du = [&](double u) {
        return std::sqrt(mu / std::max(1e-300, -2.0 * eval_F_extended(nl, u)));
    };

    // Arc lengths left (u in [1/2, 1-1e-6]) and right (u in [1e-6, 1/2]) of
    // the center, by Gauss-Legendre on logit-spaced panels; the logit map
    // absorbs the near-endpoint blow-up of dxi/du.
    constexpr double kClip = 1e-6;
    constexpr int kPanels = 200;
    static const double gx[4] = {0.0, 0.4058451513773972, 0.7415311855993945,
                                 0.9491079123427585};
    static const double gw[4] = {0.4179591836734694, 0.3818300505051189,
                                 0.2797053914892766, 0.1294849661688697};
    auto logit = [](double x) { return std::log(x / (1.0 - x)); };
    auto sigma = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
    auto arc = [&](double u_lo, double u_hi) {
        double t0 = logit(u_lo), t1 = logit(u_hi);
        double total = 0.0, dt = (t1 - t0) / kPanels;
        for (int p = 0; p < kPanels; ++p) {
            double mid = t0 + (p + 0.5) * dt, half = 0.5 * dt;
            auto g = [&](double t) {
                double u = sigma(t);
                return dxi_du(u) * u * (1.0 - u); // du/dt = u(1-u)
            };
            double s = gw[0] * g(mid);
            for (int k = 1; k < 4; ++k)
                s += gw[k] * (g(mid - half * gx[k]) + g(mid + half * gx[k]));
            total += s * half;
        }
        return total;
    };
    double left = arc(0.5, 1.0 - kClip);
    double right = arc(kClip, 0.5);

    double step = (left + right) / (n - 1);
    int j_mid = std::clamp(static_cast<int>(std::lround(left / step)), 1, n - 2);

    // March the profile ODE u' = -sqrt(-2F(u)/mu) out of the center node.
    auto rhs = [&](double u) {
        return -std::sqrt(std::max(0.0, -2.0 * eval_F_extended(nl, u)) / mu);
    };
    auto rk4 = [&](double u, double h) {
        double k1 = rhs(u);
        double k2 = rhs(u + 0.5 * h * k1);
        double k3 = rhs(u + 0.5 * h * k2);
        double k4 = rhs(u + h * k3);
        return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    WaveSolution w;
    w.speed = 0.0;
    w.mu = mu;
    w.u.assign(n, 0.0);
    w.xi.assign(n, 0.0);
    w.u[j_mid] = 0.5;
    constexpr int kSub = 4;
    for (int j = j_mid + 1; j < n; ++j) {
        double u = w.u[j - 1];
        for (int s = 0; s < kSub; ++s) u = rk4(u, step / kSub);
        w.u[j] = std::clamp(u, 0.0, 1.0);
    }
    for (int j = j_mid - 1; j >= 0; --j) {
        double u = w.u[j + 1];
        for (int s = 0; s < kSub; ++s) u = rk4(u, -step / kSub);
        w.u[j] = std::clamp(u, 0.0, 1.0);
    }
    for (int j = 0; j < n; ++j) w.xi[j] = step * (j - j_mid);
    return w;
}

} // namespace rdc
