#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdc/errors.hpp"

namespace rdc {

// Reaction terms are evaluable on [-margin, 1+margin]; solvers may overshoot
// [0,1] transiently and the evaluation window must absorb that.
inline constexpr double kOvershootMargin = 0.1;

enum class NonlinearityKind { CubicBistable, Logistic, Custom };

// A reaction term f with primitive F(s) = int_0^s f.
//
// Built-in kinds evaluate in closed form:
//   CubicBistable(theta): f(s) = s(1-s)(s-theta)
//   Logistic:             f(s) = s(1-s)
// Custom interpolates samples of f on a uniform grid over [0,1] with a
// monotone cubic (Fritsch-Carlson) and integrates the primitive by adaptive
// quadrature to 1e-12.
//
// Outside [-kOvershootMargin, 1+kOvershootMargin] every kind continues
// C1-linearly from the window edges; the checked evaluators reject such
// arguments, the *_extended evaluators accept them.
class Nonlinearity {
public:
    static Nonlinearity cubic_bistable(double theta);
    static Nonlinearity logistic();
    static Nonlinearity custom(std::vector<double> f_samples, double lipschitz);

    NonlinearityKind kind() const { return kind_; }

    // Interior zero; ValidationError when the term is not bistable.
    double theta() const;
    bool has_theta() const { return theta_.has_value(); }

    // Bound on |f'| over the evaluation window.
    double lipschitz() const { return lipschitz_; }

    // Schema: {"kind":"cubic_bistable","theta":0.333...} | {"kind":"logistic"}
    //       | {"kind":"custom","samples":[...],"lipschitz":1.0}
    std::string to_json() const;
    static Nonlinearity from_json(const std::string& text);

    const std::vector<double>& samples() const { return samples_; }

private:
    Nonlinearity() = default;

    NonlinearityKind kind_ = NonlinearityKind::Logistic;
    std::optional<double> theta_;
    double lipschitz_ = 0.0;
    std::vector<double> samples_; // Custom only, f on uniform [0,1] grid
    std::vector<double> slopes_;  // Custom only, Fritsch-Carlson derivatives

    friend double eval_f_extended(const Nonlinearity&, double);
    friend double eval_df_extended(const Nonlinearity&, double);
    friend double eval_F_extended(const Nonlinearity&, double);
};

enum class Variant { Monostable, BistableF1Positive, BistableF1Zero };

struct Classification {
    Variant variant;
    double F1 = 0.0;                // F(1)
    std::optional<double> Ftheta;   // F(theta), bistable only
    std::optional<double> theta1;   // min{s>0 : F(s)=0}, bistable with F1 >= 0

    bool bistable() const { return variant != Variant::Monostable; }
};

// Checked evaluation; ValidationError outside the overshoot window.
double eval_f(const Nonlinearity& nl, double s);
double eval_df(const Nonlinearity& nl, double s);
double eval_F(const Nonlinearity& nl, double s);

// Unchecked evaluation, C1 linear continuation beyond the window.
double eval_f_extended(const Nonlinearity& nl, double s);
double eval_df_extended(const Nonlinearity& nl, double s);
double eval_F_extended(const Nonlinearity& nl, double s);

// Sign-pattern classification with tolerance 1e-12 on F(1); theta1 located
// by bracketing on a 1e-3 grid plus bisection to 1e-10.
Classification classify(const Nonlinearity& nl);

// Phase-plane energy E(u,v) = v^2/2 + F(u).
double energy(const Nonlinearity& nl, double u, double v);

// Half-width sqrt(-2F(u)) of the invariant phase-plane region at height u.
// Requires a bistable term with F(1) >= 0 and u in [0, theta1].
double region_halfwidth(const Nonlinearity& nl, double u);

} // namespace rdc
