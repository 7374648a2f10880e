#pragma once

// Critical-line machinery for building and checking ordinate fixtures.
// Test-suite support only: favors clarity and verifiable accuracy over the
// throughput concerns of the main library.

namespace mh::support {

// Phase of the functional equation, from the standard asymptotic series.
// Validated for t >= 9; absolute error around 1e-12.
double theta(double t);

// d(theta)/dt, for Newton steps when inverting the phase.
double theta_derivative(double t);

// Hardy Z from Euler-Maclaurin-summed zeta on the critical line.
// Reference quality (~1e-11 absolute) but costs O(t) terms per call.
// Validated for t in [9, 50000].
double z_euler_maclaurin(double t);

// Hardy Z from the Riemann-Siegel expansion with two correction terms.
// Absolute error ~2.5e-6 at t = 3000 shrinking to ~1e-9 at t = 1e6.
double z_riemann_siegel(double t);

// Evaluator used by the zero finder: Euler-Maclaurin below the crossover,
// Riemann-Siegel above it.
double z_value(double t);

inline constexpr double kZCrossover = 3000.0;

}  // namespace mh::support
