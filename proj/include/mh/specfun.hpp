#pragma once

#include <complex>
#include <functional>
#include <utility>

#include "mh/errors.hpp"

namespace mh {

using cplx = std::complex<double>;

// Parameters of the concentrated kernel pair K_{c,eps} (physical side) and
// l_{c,eps} (transform side): c is the concentration, eps the half-width of
// the support of K_{c,eps} in log-x units.
struct KernelParams {
    double c;
    double eps;

    // Throws parameter_error unless c >= 3 and eps > 0 and both are finite.
    // The tighter eps < 1e-3 needed by the certified error bounds is enforced
    // by the bound evaluators; the kernel pair itself is well defined for any
    // positive eps and small test cases use eps = 1.
    static KernelParams validated(double c, double eps);
};

// Modified Bessel function I_0(t) = sum_k (t/2)^{2k} / (k!)^2.
// Requires 0 <= t <= 1e4; throws range_error above ~709 where the value
// overflows a double (use log_bessel_i0 there).
double bessel_i0(double t);

// log I_0(t), valid over the whole range 0 <= t <= 1e4.
double log_bessel_i0(double t);

// log(sinh c) and log(cosh c), stable for large c (no overflow up to ~1e8).
double log_sinh(double c);
double log_cosh(double c);

// Logan kernel l_c(u) for real u, normalized so l_c(0) = 1:
//   l_c(u) = (c/sinh c) * sin(sqrt(u^2-c^2)) / sqrt(u^2-c^2)
// with the analytic (sinh) branch for |u| < c.
double logan_ell(double c, double u);

// n-th derivative d^n/du^n l_c(u). Series-based; requires |u^2-c^2| <= 25
// (throws accuracy_error outside, where the term-wise series loses accuracy).
double logan_ell_derivative(double c, int n, double u);

// Dilated transform l_{c,eps}(x) = l_c(eps*x) for complex x with
// |Im(eps*x)| <= 1.
cplx logan(const KernelParams& p, cplx x);

// d^n/dx^n l_{c,eps}(x) = eps^n * l_c^{(n)}(eps*x); same domain notes as
// logan_ell_derivative.
cplx logan_derivative(const KernelParams& p, int n, cplx x);

// Concentrated kernel K_{c,eps}(y) = (1/eps) K_c(y/eps) where
// K_c(y) = (c/(2 sinh c)) I_0(c sqrt(1-y^2)) for |y| < 1 and 0 otherwise.
// Exactly zero for |y| >= eps; nonnegative everywhere.
double kernel_k(const KernelParams& p, double y);

// Exponential integral Ei(x) for real x != 0 (principal value for x > 0).
double ei(double x);

// Eit(z): equals Ei(z) for real z and the principal-branch continuation
// -E1(-z) off the real axis. Throws domain_error at z = 0.
cplx eit(cplx z);

// (value, bound) for the integral of 1/(t^2 log(t) (t^2-1)) over [x, inf).
// bound = x^{-3}. For 3*log(x) >= 600 the value is reported as the interval
// [0, bound], i.e. value = 0 (see module notes); otherwise the value carries
// relative error <= 1e-10. Requires x > 1.
std::pair<double, double> trivial_zero_integral(double x);

// Adaptive Gauss-Legendre quadrature of f over [a, b]. The error target is
// max(rel_tol * |integral|, abs_floor); throws accuracy_error if the
// subdivision cannot reach it.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_floor = 0.0);
cplx integrate_complex(const std::function<cplx(double)>& f, double a,
                       double b, double rel_tol, double abs_floor = 0.0);

}  // namespace mh
