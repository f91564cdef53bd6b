#include "rdc/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>

namespace rdc {

namespace {

constexpr double kLo = -kOvershootMargin;
constexpr double kHi = 1.0 + kOvershootMargin;
constexpr double kF1Tol = 1e-12; // distinguishes F(1)=0 from F(1)>0

void check_window(double s, const char* what) {
    if (!(s >= kLo && s <= kHi))
        throw ValidationError(std::string(what) + ": argument " +
                              std::to_string(s) + " outside [-0.1, 1.1]");
}

// ---- cubic / logistic closed forms ----------------------------------------

double cubic_f(double th, double s) { return s * (1.0 - s) * (s - th); }
double cubic_df(double th, double s) { return -3.0 * s * s + 2.0 * (1.0 + th) * s - th; }
double cubic_F(double th, double s) {
    return s * s * (-th / 2.0 + (1.0 + th) * s / 3.0 - s * s / 4.0);
}

double logistic_f(double s) { return s * (1.0 - s); }
double logistic_df(double s) { return 1.0 - 2.0 * s; }
double logistic_F(double s) { return s * s * (0.5 - s / 3.0); }

// ---- monotone cubic interpolation (Fritsch-Carlson slopes) ----------------

std::vector<double> fc_slopes(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t j = 0; j + 1 < n; ++j) d[j] = (y[j + 1] - y[j]) / h;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (d[j - 1] * d[j] <= 0.0)
            m[j] = 0.0;
        else
            m[j] = 2.0 * d[j - 1] * d[j] / (d[j - 1] + d[j]);
    }
    auto end_slope = [](double d0, double d1) {
        double s = (3.0 * d0 - d1) / 2.0;
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    };
    m[0] = (n > 2) ? end_slope(d[0], d[1]) : d[0];
    m[n - 1] = (n > 2) ? end_slope(d[n - 2], d[n - 3]) : d[n - 2];
    return m;
}

struct HermiteEval {
    double value;
    double deriv;
};

HermiteEval hermite(const std::vector<double>& y, const std::vector<double>& m,
                    double h, double x) {
    const std::size_t n = y.size();
    double t = x / h;
    std::size_t j = static_cast<std::size_t>(std::clamp(
        static_cast<long>(std::floor(t)), 0L, static_cast<long>(n - 2)));
    double u = (x - static_cast<double>(j) * h) / h;
    double u2 = u * u, u3 = u2 * u;
    double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    double v = h00 * y[j] + h * h10 * m[j] + h01 * y[j + 1] + h * h11 * m[j + 1];
    double d00 = (6 * u2 - 6 * u) / h, d10 = 3 * u2 - 4 * u + 1;
    double d01 = (-6 * u2 + 6 * u) / h, d11 = 3 * u2 - 2 * u;
    double dv = d00 * y[j] + d10 * m[j] + d01 * y[j + 1] + d11 * m[j + 1];
    return {v, dv};
}

double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b,
                 double tol) {
    if (a == b) return 0.0;
    double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(g, a, b, fa, fm, fb, whole, tol, 40);
}

// Interior zeros of f on (0,1), located by sign changes on a 1e-3 grid plus
// bisection; |f| <= 1e-13 counts as zero.
struct SignPattern {
    std::vector<double> zeros;
    bool negative_seen = false;
    bool positive_seen = false;
    bool pattern_bistable = false; // f<0 on (0,theta), f>0 on (theta,1)
};

SignPattern scan_sign(const std::function<double(double)>& f) {
    SignPattern p;
    const int n = 1000;
    double prev = f(1e-3);
    int prev_sign = (std::abs(prev) <= 1e-13) ? 0 : (prev > 0 ? 1 : -1);
    int first_sign = prev_sign, last_sign = prev_sign;
    for (int k = 2; k < n; ++k) {
        double s = static_cast<double>(k) / n;
        double val = f(s);
        int sign = (std::abs(val) <= 1e-13) ? 0 : (val > 0 ? 1 : -1);
        if (sign < 0) p.negative_seen = true;
        if (sign > 0) p.positive_seen = true;
        if (first_sign == 0) first_sign = sign;
        if (sign != 0) last_sign = sign;
        if (prev_sign != 0 && sign != 0 && sign != prev_sign) {
            double lo = static_cast<double>(k - 1) / n, hi = s;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((f(mid) > 0 ? 1 : -1) == prev_sign) lo = mid;
                else hi = mid;
            }
            p.zeros.push_back(0.5 * (lo + hi));
        }
        if (sign != 0) prev_sign = sign;
        prev = val;
    }
    p.pattern_bistable =
        p.zeros.size() == 1 && first_sign < 0 && last_sign > 0;
    return p;
}

} // namespace

// ---- construction ----------------------------------------------------------

Nonlinearity Nonlinearity::cubic_bistable(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ValidationError("cubic_bistable: theta must lie in (0,1)");
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::CubicBistable;
    nl.theta_ = theta;
    double vertex = (1.0 + theta) / 3.0;
    nl.lipschitz_ = std::max({std::abs(cubic_df(theta, kLo)),
                              std::abs(cubic_df(theta, kHi)),
                              std::abs(cubic_df(theta, vertex))});
    return nl;
}

Nonlinearity Nonlinearity::logistic() {
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::Logistic;
    nl.lipschitz_ = std::max(std::abs(logistic_df(kLo)), std::abs(logistic_df(kHi)));
    return nl;
}

Nonlinearity Nonlinearity::custom(std::vector<double> f_samples, double lipschitz) {
    if (f_samples.size() < 4)
        throw ValidationError("custom: need at least 4 samples of f on [0,1]");
    for (double v : f_samples)
        if (!std::isfinite(v)) throw ValidationError("custom: non-finite sample");
    if (std::abs(f_samples.front()) > 1e-10 || std::abs(f_samples.back()) > 1e-10)
        throw ValidationError("custom: f must vanish at 0 and 1");
    if (!(lipschitz > 0.0)) throw ValidationError("custom: lipschitz must be positive");

    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::Custom;
    nl.samples_ = std::move(f_samples);
    nl.slopes_ = fc_slopes(nl.samples_, 1.0 / static_cast<double>(nl.samples_.size() - 1));
    nl.lipschitz_ = lipschitz;

    // The stated bound must dominate the finite-difference slopes of f over a
    // 1e-3 grid spanning the evaluation window.
    double sup = 0.0;
    double prev = eval_f_extended(nl, kLo);
    for (int k = 1; k <= 1200; ++k) {
        double s = kLo + 1e-3 * static_cast<double>(k);
        double cur = eval_f_extended(nl, s);
        sup = std::max(sup, std::abs(cur - prev) / 1e-3);
        prev = cur;
    }
    if (lipschitz < sup * (1.0 - 1e-12))
        throw ValidationError("custom: lipschitz below observed slope " +
                              std::to_string(sup));

    auto pattern = scan_sign([&](double s) { return eval_f_extended(nl, s); });
    if (pattern.pattern_bistable) nl.theta_ = pattern.zeros.front();
    return nl;
}

double Nonlinearity::theta() const {
    if (!theta_) throw ValidationError("theta: nonlinearity is not bistable");
    return *theta_;
}

// ---- evaluation ------------------------------------------------------------

double eval_f_extended(const Nonlinearity& nl, double s) {
    switch (nl.kind_) {
    case NonlinearityKind::CubicBistable: {
        double th = *nl.theta_;
        if (s < kLo) return cubic_f(th, kLo) + cubic_df(th, kLo) * (s - kLo);
        if (s > kHi) return cubic_f(th, kHi) + cubic_df(th, kHi) * (s - kHi);
        return cubic_f(th, s);
    }
    case NonlinearityKind::Logistic:
        if (s < kLo) return logistic_f(kLo) + logistic_df(kLo) * (s - kLo);
        if (s > kHi) return logistic_f(kHi) + logistic_df(kHi) * (s - kHi);
        return logistic_f(s);
    case NonlinearityKind::Custom: {
        double h = 1.0 / static_cast<double>(nl.samples_.size() - 1);
        if (s < 0.0) return nl.samples_.front() + nl.slopes_.front() * s;
        if (s > 1.0) return nl.samples_.back() + nl.slopes_.back() * (s - 1.0);
        return hermite(nl.samples_, nl.slopes_, h, s).value;
    }
    }
    throw Error("eval_f_extended: unreachable");
}

double eval_df_extended(const Nonlinearity& nl, double s) {
    switch (nl.kind_) {
    case NonlinearityKind::CubicBistable: {
        double th = *nl.theta_;
        return cubic_df(th, std::clamp(s, kLo, kHi));
    }
    case NonlinearityKind::Logistic:
        return logistic_df(std::clamp(s, kLo, kHi));
    case NonlinearityKind::Custom: {
        double h = 1.0 / static_cast<double>(nl.samples_.size() - 1);
        if (s < 0.0) return nl.slopes_.front();
        if (s > 1.0) return nl.slopes_.back();
        return hermite(nl.samples_, nl.slopes_, h, s).deriv;
    }
    }
    throw Error("eval_df_extended: unreachable");
}

double eval_F_extended(const Nonlinearity& nl, double s) {
    switch (nl.kind_) {
    case NonlinearityKind::CubicBistable: {
        double th = *nl.theta_;
        if (s < kLo) {
            double d = s - kLo;
            return cubic_F(th, kLo) + cubic_f(th, kLo) * d + 0.5 * cubic_df(th, kLo) * d * d;
        }
        if (s > kHi) {
            double d = s - kHi;
            return cubic_F(th, kHi) + cubic_f(th, kHi) * d + 0.5 * cubic_df(th, kHi) * d * d;
        }
        return cubic_F(th, s);
    }
    case NonlinearityKind::Logistic:
        if (s < kLo) {
            double d = s - kLo;
            return logistic_F(kLo) + logistic_f(kLo) * d + 0.5 * logistic_df(kLo) * d * d;
        }
        if (s > kHi) {
            double d = s - kHi;
            return logistic_F(kHi) + logistic_f(kHi) * d + 0.5 * logistic_df(kHi) * d * d;
        }
        return logistic_F(s);
    case NonlinearityKind::Custom:
        return integrate([&](double x) { return eval_f_extended(nl, x); }, 0.0,
                         s, 1e-12);
    }
    throw Error("eval_F_extended: unreachable");
}

double eval_f(const Nonlinearity& nl, double s) {
    check_window(s, "eval_f");
    return eval_f_extended(nl, s);
}

double eval_df(const Nonlinearity& nl, double s) {
    check_window(s, "eval_df");
    return eval_df_extended(nl, s);
}

double eval_F(const Nonlinearity& nl, double s) {
    check_window(s, "eval_F");
    return eval_F_extended(nl, s);
}

// ---- classification --------------------------------------------------------

Classification classify(const Nonlinearity& nl) {
    Classification cls{};
    cls.F1 = eval_F_extended(nl, 1.0);

    bool bistable = false;
    double theta = 0.0;
    switch (nl.kind()) {
    case NonlinearityKind::CubicBistable:
        bistable = true;
        theta = nl.theta();
        break;
    case NonlinearityKind::Logistic:
        bistable = false;
        break;
    case NonlinearityKind::Custom: {
        auto pattern = scan_sign([&](double s) { return eval_f_extended(nl, s); });
        if (pattern.pattern_bistable) {
            bistable = true;
            theta = pattern.zeros.front();
        } else if (pattern.zeros.empty() && pattern.positive_seen &&
                   !pattern.negative_seen) {
            bistable = false;
        } else {
            throw ValidationError(
                "classify: sign pattern matches neither monostable nor bistable");
        }
        break;
    }
    }

    if (!bistable) {
        cls.variant = Variant::Monostable;
        return cls;
    }

    cls.Ftheta = eval_F_extended(nl, theta);
    if (std::abs(cls.F1) <= kF1Tol) {
        cls.variant = Variant::BistableF1Zero;
        cls.theta1 = 1.0;
        return cls;
    }
    if (cls.F1 < 0.0)
        throw ValidationError("classify: bistable with F(1) < 0 is unsupported");

    cls.variant = Variant::BistableF1Positive;
    // First zero of F above theta: F(theta) < 0, F(1) > 0.
    double lo = theta, hi = 1.0;
    for (double s = theta; s < 1.0; s += 1e-3) {
        double next = std::min(s + 1e-3, 1.0);
        if (eval_F_extended(nl, next) >= 0.0) {
            lo = s;
            hi = next;
            break;
        }
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (eval_F_extended(nl, mid) < 0.0) lo = mid;
        else hi = mid;
    }
    cls.theta1 = 0.5 * (lo + hi);
    return cls;
}

double energy(const Nonlinearity& nl, double u, double v) {
    check_window(u, "energy");
    return 0.5 * v * v + eval_F_extended(nl, u);
}

double region_halfwidth(const Nonlinearity& nl, double u) {
    check_window(u, "region_halfwidth");
    Classification cls = classify(nl);
    if (!cls.bistable())
        throw ValidationError("region_halfwidth: requires a bistable term with F(1) >= 0");
    // The slack absorbs round-off and the 1e-10 bisection error of a computed
    // theta1 fed back in as u; genuine violations exceed it by orders.
    double Fu = eval_F_extended(nl, u);
    if (Fu > 1e-11)
        throw ValidationError("region_halfwidth: F(u) > 0, u outside [0, theta1]");
    return std::sqrt(std::max(0.0, -2.0 * Fu));
}

// ---- serialization ---------------------------------------------------------

std::string Nonlinearity::to_json() const {
    nlohmann::json j;
    switch (kind_) {
    case NonlinearityKind::CubicBistable:
        j["kind"] = "cubic_bistable";
        j["theta"] = *theta_;
        break;
    case NonlinearityKind::Logistic:
        j["kind"] = "logistic";
        break;
    case NonlinearityKind::Custom:
        j["kind"] = "custom";
        j["samples"] = samples_;
        j["lipschitz"] = lipschitz_;
        break;
    }
    return j.dump();
}

Nonlinearity Nonlinearity::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("nonlinearity: bad JSON: ") + e.what());
    }
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("nonlinearity: missing \"kind\"");
    std::string kind = j["kind"];
    try {
        if (kind == "cubic_bistable") return cubic_bistable(j.at("theta").get<double>());
        if (kind == "logistic") return logistic();
        if (kind == "custom")
            return custom(j.at("samples").get<std::vector<double>>(),
                          j.at("lipschitz").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("nonlinearity: ") + e.what());
    }
    throw ValidationError("nonlinearity: unknown kind \"" + kind + "\"");
}

} // namespace rdc
