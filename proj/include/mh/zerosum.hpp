#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mh/dd.hpp"
#include "mh/errors.hpp"
#include "mh/specfun.hpp"
#include "mh/zeros.hpp"

namespace mh {

// Uniform evaluation lattice y_k = y0 + k*dy, k = 0..n-1. The origin and
// step are carried as dd so that phases gamma*y keep <= 1e-9 absolute error
// even when gamma*y reaches ~1e13.
struct GridSpec {
    dd y0;
    dd dy;
    std::size_t n = 0;

    // Throws parameter_error unless dy > 0, n >= 1 and y0 >= 1.
    const GridSpec& validated() const;
};

enum class SigmaMode { kDirect, kFast };

// Result of the kernel-weighted certification sum over zeros.
struct WeightedZeroSum {
    double value = 0.0;       // sum of folded conjugate-pair terms
    double T = 0.0;           // ordinate cutoff actually applied
    dd omega;                 // evaluation point
    KernelParams params{0.0, 0.0};
    double phase_precision = 0.0;  // guaranteed absolute phase error bound
};

// sigma_T(y) = sum over |gamma| <= T of e^{i gamma y} / (1/2 - i gamma),
// with each conjugate pair folded to 2*Re(e^{i gamma y}/(1/2 - i gamma)).
// Summed in fixed 4096-zero blocks (compensated within a block, blocks
// folded in order), so results are bitwise reproducible across thread
// counts. Throws coverage_error when T exceeds the dataset.
double sigma_at(const ZeroSet& zs, double T, const dd& y);

// sigma_T on a uniform grid. kDirect evaluates every point independently;
// kFast uses a gridding/FFT scheme that must agree with kDirect within
// 1e-9 absolute at every point.
std::vector<double> sigma_grid(const ZeroSet& zs, double T,
                               const GridSpec& grid, SigmaMode mode);

// Sum over zero pairs 0 < gamma <= T of
//   2 * Re( e^{-i gamma omega} l_{c,eps}(gamma) (1/rho - 1/(omega rho^2)) ),
// rho = 1/2 + i*gamma. Requires T <= c/eps and omega - eps > 200
// (parameter_error) and T within the dataset (coverage_error).
WeightedZeroSum kernel_weighted_sum(const ZeroSet& zs, const dd& omega,
                                    const KernelParams& params, double T);

// Direct adaptive quadrature of
//   Phi = integral over [omega-eps, omega+eps] of
//         K_{c,eps}(y-omega) * y * e^{(1/2-a)y} * Eit((a-rho)y) dy
// with relative error <= 1e-8; the reference implementation the asymptotic
// expansion is checked against. Requires 0 < eps < omega, a in [0,1],
// Re(rho) in [0,1] and Im(rho) != 0.
cplx phi_quadrature(double omega, const KernelParams& params, cplx rho,
                    double a);

// Asymptotic expansion of Phi: terms[j-1] = (j-1)! F^{(-j)}(0) / (rho-a)^j
// for j = 1..k, where F^{(-1)}(0) = -e^{(1/2-rho)omega} lhat(gt) with
// gt = (rho - 1/2)/i, and for j >= 2 the 1/omega expansion of F^{(-j)}(0)
// is truncated at order m. theta_bound is the rigorous remainder bound
// covering both truncations, so |Phi - sum(terms)| <= theta_bound.
struct PhiExpansion {
    std::vector<cplx> terms;
    double theta_bound = 0.0;
};

PhiExpansion phi_expansion(double omega, const KernelParams& params, cplx rho,
                           int k, int m, double a = 0.0);

}  // namespace mh
