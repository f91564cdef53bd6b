#pragma once

#include <vector>

#include "rdc/nonlinearity.hpp"

namespace rdc {

// One-dimensional front U(xi) with U(-inf) -> 1, U(+inf) -> 0, sampled on a
// uniform xi grid and shifted so the half-level sits at xi ~ 0.
struct WaveSolution {
    double speed = 0.0;
    double mu = 1.0;
    std::vector<double> xi;
    std::vector<double> u;
};

// Front speed of mu U'' + c U' + f(U) = 0 connecting (1,0) to (0,0).
// Bistable: phase-plane shooting from the unstable manifold at (1,0),
// bisecting c in [-5, 5] to a 1e-9 bracket (well inside the 1e-6 contract).
// Monostable: returns the pulled-front speed 2 sqrt(mu f'(0)) after checking
// that the connection exists at that speed.
// Throws NumericalError when no bracket exists in [-5, 5].
double wave_speed(const Nonlinearity& nl, double mu);

// Profile for the connecting front: the converged shooting trajectory,
// decimated to at most max_samples points. Balanced wells (F(1) = 0)
// delegate to stationary_profile with max_samples as the sample count.
WaveSolution wave_profile(const Nonlinearity& nl, double mu,
                          int max_samples = 100001);

// Stationary front for balanced wells via the quadrature
// U' = -sqrt(-2 F(U)/mu), integrated between U = 1-1e-6 and U = 1e-6 on n
// uniform xi samples with U = 1/2 exactly at the xi = 0 node.
// Requires classification BistableF1Zero and n >= 9.
WaveSolution stationary_profile(const Nonlinearity& nl, double mu, int n);

} // namespace rdc
