#include "mh/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mh {

namespace {

using cplxl = std::complex<long double>;

constexpr long double kEulerGamma = 0.5772156649015328606065120900824024L;

// ---------------------------------------------------------------------------
// 32-point Gauss-Legendre rule, nodes and weights computed once in long
// double by Newton iteration on the Legendre polynomial.
// ---------------------------------------------------------------------------

struct GL32 {
    std::array<double, 32> x{};
    std::array<double, 32> w{};

    GL32() {
        constexpr int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            long double t =
                std::cos(3.14159265358979323846264338328L * (i + 0.75L) /
                         (n + 0.5L));
            long double p0 = 0.0L, dp = 0.0L;
            for (int iter = 0; iter < 100; ++iter) {
                p0 = 1.0L;
                long double p1 = 0.0L;
                for (int j = 0; j < n; ++j) {
                    long double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
                }
                dp = n * (t * p0 - p1) / (t * t - 1.0L);
                long double dt = p0 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-19L) break;
            }
            long double wi = 2.0L / ((1.0L - t * t) * dp * dp);
            x[i] = static_cast<double>(t);
            w[i] = static_cast<double>(wi);
            x[n - 1 - i] = -x[i];
            w[n - 1 - i] = w[i];
        }
    }
};

const GL32& gl32() {
    static const GL32 rule;
    return rule;
}

template <class T>
T gl32_apply(const std::function<T(double)>& f, double a, double b) {
    const GL32& g = gl32();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    T acc{};
    for (int i = 0; i < 32; ++i) acc += T(g.w[i]) * f(mid + half * g.x[i]);
    return T(half) * acc;
}

inline double abs_val(double v) { return std::fabs(v); }
inline double abs_val(const cplx& v) { return std::abs(v); }

// Accepts a panel when the refinement changes it by no more than
// rel_tol * |panel| + abs_tol; `force` levels are always subdivided so a
// feature narrower than the initial sampling still gets discovered.
template <class T>
T adapt_rec(const std::function<T(double)>& f, double a, double b, T whole,
            double rel_tol, double abs_tol, int force, int depth) {
    const double m = 0.5 * (a + b);
    T left = gl32_apply(f, a, m);
    T right = gl32_apply(f, m, b);
    T sum = left + right;
    if (force <= 0 &&
        abs_val(sum - whole) <= rel_tol * abs_val(sum) + abs_tol)
        return sum;
    if (depth <= 0)
        throw accuracy_error(
            "adaptive quadrature failed to converge to the requested "
            "tolerance");
    return adapt_rec(f, a, m, left, rel_tol, 0.5 * abs_tol, force - 1,
                     depth - 1) +
           adapt_rec(f, m, b, right, rel_tol, 0.5 * abs_tol, force - 1,
                     depth - 1);
}

template <class T>
T integrate_impl(const std::function<T(double)>& f, double a, double b,
                 double rel_tol, double abs_floor) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw domain_error("integrate: endpoints must be finite");
    if (a == b) return T{};
    if (!(rel_tol > 0) && !(abs_floor > 0))
        throw parameter_error("integrate: no positive tolerance given");
    T whole = gl32_apply(f, a, b);
    // Safety factor: the per-node criterion slightly undercounts the error
    // accumulated over many panels.
    return adapt_rec(f, a, b, whole, 0.25 * rel_tol, 0.25 * abs_floor, 2, 48);
}

// ---------------------------------------------------------------------------
// Modified Bessel I_0.
// ---------------------------------------------------------------------------

long double i0_series_ld(long double t) {
    const long double q = 0.25L * t * t;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return sum;
}

// sum_k c_k / t^k with c_0 = 1, c_{k+1} = c_k (2k+1)^2 / (8(k+1)); the
// asymptotic factor of I_0(t) ~ e^t / sqrt(2 pi t).
long double i0_asym_factor_ld(long double t) {
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 60; ++k) {
        long double next =
            term * (2 * k + 1) * (2 * k + 1) / (8.0L * (k + 1)) / t;
        if (std::fabs(next) >= std::fabs(term)) break;  // smallest term
        term = next;
        sum += term;
        if (std::fabs(term) < 1e-22L * sum) break;
    }
    return sum;
}

void check_i0_domain(double t) {
    if (!std::isfinite(t) || t < 0)
        throw domain_error("bessel_i0: argument must satisfy 0 <= t <= 1e4");
    if (t > 1e4)
        throw range_error("bessel_i0: argument above supported range 1e4");
}

// ---------------------------------------------------------------------------
// Logan kernel l_c and the entire function S(w) = sin(sqrt(w))/sqrt(w).
// ---------------------------------------------------------------------------

// c / sinh(c) evaluated without overflow: 2 c e^{-c} / (1 - e^{-2c}).
long double c_over_sinh_ld(double c) {
    long double cl = c;
    return 2.0L * cl * std::exp(-cl) / (-std::expm1(-2.0L * cl));
}

// r-th derivative of S at w, by the term-wise series
//   S^{(r)}(w) = sum_{j>=0} (-1)^{j+r} ((j+r)!/j!) w^j / (2j+2r+1)!.
// Accurate for |w| <= 25 (alternating but mild there).
template <class C>
C s_derivative_series(int r, C w) {
    // term at j=0: (-1)^r r! / (2r+1)!
    long double t0 = (r % 2 == 0) ? 1.0L : -1.0L;
    for (int i = r + 1; i <= 2 * r + 1; ++i) t0 /= i;
    C term = C(static_cast<double>(t0));
    C sum = term;
    for (int j = 1; j < 80; ++j) {
        // ratio of consecutive terms:
        //   -w (j+r) / (j (2j+2r+1) (2j+2r))
        const double denom = static_cast<double>(j) * (2 * j + 2 * r + 1) *
                             (2 * j + 2 * r);
        term *= -w * (static_cast<double>(j + r) / denom);
        sum += term;
        if (abs_val(term) < 1e-20L * abs_val(sum) + 1e-300) break;
    }
    return sum;
}

inline double abs_val_c(const cplx& v) { return std::abs(v); }

void check_kernel_params(const KernelParams& p) {
    if (!(std::isfinite(p.c) && std::isfinite(p.eps)) || p.c < 3.0 ||
        !(p.eps > 0))
        throw parameter_error(
            "kernel parameters require c >= 3 and eps > 0 (finite)");
}

// l_c(u) core for complex u; w = u^2 - c^2 computed as (u-c)(u+c).
cplx logan_core_complex(double c, cplx u) {
    const cplx w = (u - c) * (u + c);
    const long double ratio = c_over_sinh_ld(c);
    if (std::abs(w) <= 25.0)
        return static_cast<double>(ratio) * s_derivative_series<cplx>(0, w);
    // sin(sqrt(w))/sqrt(w) = sinh(v)/v with v = sqrt(-w), Re v >= 0:
    //   l = (c/v) e^{v-c} (1 - e^{-2v}) / (1 - e^{-2c}).
    const cplx v = std::sqrt(-w);
    const long double denom = -std::expm1(-2.0L * static_cast<long double>(c));
    const cplx num = 1.0 - std::exp(-2.0 * v);
    return (c / v) * std::exp(v - c) * num / static_cast<double>(denom);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

KernelParams KernelParams::validated(double c, double eps) {
    KernelParams p{c, eps};
    check_kernel_params(p);
    return p;
}

double bessel_i0(double t) {
    check_i0_domain(t);
    if (t <= 30.0) return static_cast<double>(i0_series_ld(t));
    if (t > 709.0)
        throw range_error(
            "bessel_i0: value overflows double precision; use log_bessel_i0");
    const long double tl = t;
    const long double pref =
        std::exp(tl) / std::sqrt(2.0L * 3.14159265358979323846264338328L * tl);
    return static_cast<double>(pref * i0_asym_factor_ld(tl));
}

double log_bessel_i0(double t) {
    check_i0_domain(t);
    if (t <= 30.0) return static_cast<double>(std::log(i0_series_ld(t)));
    const long double tl = t;
    const long double lg =
        tl - 0.5L * std::log(2.0L * 3.14159265358979323846264338328L * tl) +
        std::log(i0_asym_factor_ld(tl));
    return static_cast<double>(lg);
}

double log_sinh(double c) {
    if (!(c > 0) || !std::isfinite(c))
        throw domain_error("log_sinh: argument must be positive and finite");
    const long double cl = c;
    if (c < 1.0) return static_cast<double>(std::log(std::sinh(cl)));
    // sinh c = (e^c / 2)(1 - e^{-2c})
    return static_cast<double>(cl - 0.69314718055994530941723212145818L +
                               std::log1p(-std::exp(-2.0L * cl)));
}

double log_cosh(double c) {
    if (!std::isfinite(c)) throw domain_error("log_cosh: non-finite argument");
    const long double cl = std::fabs(static_cast<long double>(c));
    if (cl < 1.0L) return static_cast<double>(std::log(std::cosh(cl)));
    return static_cast<double>(cl - 0.69314718055994530941723212145818L +
                               std::log1p(std::exp(-2.0L * cl)));
}

double logan_ell(double c, double u) {
    if (!(c >= 3.0) || !std::isfinite(u))
        throw parameter_error("logan_ell: requires c >= 3 and finite u");
    const double au = std::fabs(u);
    // (u-c)(u+c) keeps full relative accuracy near the seam |u| = c.
    const double w = (au - c) * (au + c);
    const long double ratio = c_over_sinh_ld(c);
    if (std::fabs(w) <= 1e-4) {
        // Four series terms put the truncation error below 1e-21.
        const double s =
            1.0 - w / 6.0 + (w * w) / 120.0 - (w * w * w) / 5040.0;
        return static_cast<double>(ratio * s);
    }
    if (w < 0) {
        const long double v = std::sqrt(static_cast<long double>(-w));
        // (c/v) e^{v-c} (1 - e^{-2v}) / (1 - e^{-2c})
        const long double num = -std::expm1(-2.0L * v);
        const long double den = -std::expm1(-2.0L * static_cast<long double>(c));
        return static_cast<double>(
            (c / v) * std::exp(v - static_cast<long double>(c)) * num / den);
    }
    const long double s = std::sqrt(static_cast<long double>(w));
    return static_cast<double>(ratio * std::sin(s) / s);
}

double logan_ell_derivative(double c, int n, double u) {
    if (!(c >= 3.0) || n < 0)
        throw parameter_error("logan_ell_derivative: requires c >= 3, n >= 0");
    if (n == 0) return logan_ell(c, u);
    const double w = (u - c) * (u + c);
    if (std::fabs(w) > 25.0)
        throw accuracy_error(
            "logan_ell_derivative: series accurate only for |u^2-c^2| <= 25");
    // d^n/du^n S(u^2-c^2) =
    //   sum_{j=0}^{floor(n/2)} n!/(j!(n-2j)!) (2u)^{n-2j} S^{(n-j)}(w)
    long double acc = 0.0L;
    for (int j = 0; 2 * j <= n; ++j) {
        long double coeff = 1.0L;
        for (int i = j + 1; i <= n; ++i) coeff *= i;        // n!/j!
        for (int i = 2; i <= n - 2 * j; ++i) coeff /= i;    // /(n-2j)!
        const long double pw = std::pow(2.0L * static_cast<long double>(u),
                                        static_cast<long double>(n - 2 * j));
        acc += coeff * pw * s_derivative_series<double>(n - j, w);
    }
    return static_cast<double>(c_over_sinh_ld(c) * acc);
}

cplx logan(const KernelParams& p, cplx x) {
    check_kernel_params(p);
    const cplx u = p.eps * x;
    if (std::fabs(u.imag()) > 1.0 + 1e-12)
        throw domain_error("logan: requires |Im(eps*x)| <= 1");
    return logan_core_complex(p.c, u);
}

cplx logan_derivative(const KernelParams& p, int n, cplx x) {
    check_kernel_params(p);
    if (n < 0) throw parameter_error("logan_derivative: n >= 0 required");
    const cplx u = p.eps * x;
    if (std::fabs(u.imag()) > 1.0 + 1e-12)
        throw domain_error("logan_derivative: requires |Im(eps*x)| <= 1");
    if (n == 0) return logan_core_complex(p.c, u);
    const double c = p.c;
    const cplx w = (u - c) * (u + c);
    if (std::abs(w) > 25.0)
        throw accuracy_error(
            "logan_derivative: series accurate only for |u^2-c^2| <= 25");
    cplx acc = 0.0;
    for (int j = 0; 2 * j <= n; ++j) {
        long double coeff = 1.0L;
        for (int i = j + 1; i <= n; ++i) coeff *= i;
        for (int i = 2; i <= n - 2 * j; ++i) coeff /= i;
        acc += static_cast<double>(coeff) *
               std::pow(2.0 * u, static_cast<double>(n - 2 * j)) *
               s_derivative_series<cplx>(n - j, w);
    }
    const double scale =
        static_cast<double>(c_over_sinh_ld(c)) * std::pow(p.eps, n);
    return scale * acc;
}

double kernel_k(const KernelParams& p, double y) {
    check_kernel_params(p);
    const double t = y / p.eps;
    if (!(std::fabs(t) < 1.0)) return 0.0;
    // c sqrt(1-t^2) via (1-t)(1+t) for accuracy near the edge.
    const double arg = p.c * std::sqrt((1.0 - std::fabs(t)) * (1.0 + std::fabs(t)));
    // (c/(2 sinh c)) I_0(arg) / eps, assembled in log space so that large c
    // (e.g. c = 280) never overflows intermediate values.
    const double lg = std::log(0.5 * p.c) - log_sinh(p.c) + log_bessel_i0(arg);
    return std::exp(lg) / p.eps;
}

// ---------------------------------------------------------------------------
// Exponential integral.
// ---------------------------------------------------------------------------

namespace {

// Power series sum_{k>=1} z^k / (k k!) in long double complex.
cplxl ei_series_sum_ld(cplxl z) {
    cplxl p = 1.0L, sum = 0.0L;
    for (int k = 1; k < 300; ++k) {
        p *= z / static_cast<long double>(k);
        cplxl term = p / static_cast<long double>(k);
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum) + 1e-4500L) break;
    }
    return sum;
}

// Same series in __float128 components (soft-float arithmetic only; needed
// in the cancellation wedge Re z >= 0, 6 < |z| <= 40).
void ei_series_sum_q(double zr, double zi, double* out_re, double* out_im) {
    __float128 pr = 1, pi = 0;      // z^k / k!
    __float128 sr = 0, si = 0;      // accumulated sum
    double max_term = 0.0;
    const __float128 qzr = zr, qzi = zi;
    for (int k = 1; k < 400; ++k) {
        const __float128 kq = k;
        // p *= z / k
        const __float128 nr = (pr * qzr - pi * qzi) / kq;
        const __float128 ni = (pr * qzi + pi * qzr) / kq;
        pr = nr;
        pi = ni;
        const __float128 tr = pr / kq, ti = pi / kq;
        sr += tr;
        si += ti;
        const double mag = std::fabs(static_cast<double>(tr)) +
                           std::fabs(static_cast<double>(ti));
        max_term = std::max(max_term, mag);
        if (k > 8 && mag < 1e-40 * max_term) break;
    }
    *out_re = static_cast<double>(sr);
    *out_im = static_cast<double>(si);
}

// E1(w) for Re w > 0 by the modified Lentz continued fraction
//   E1(w) = e^{-w} / (w + 1 - 1/(w + 3 - 4/(w + 5 - 9/(...)))).
cplxl e1_contfrac_ld(cplxl w) {
    const long double tiny = 1e-4900L;
    cplxl b = w + 1.0L;
    cplxl c = 1.0L / tiny;
    cplxl d = 1.0L / b;
    cplxl h = d;
    for (int i = 1; i < 300; ++i) {
        const long double a = -static_cast<long double>(i) * i;
        b += 2.0L;
        d = 1.0L / (a * d + b);
        c = b + a / c;
        const cplxl del = c * d;
        h *= del;
        if (std::abs(del - 1.0L) < 1e-20L) break;
    }
    return std::exp(-w) * h;
}

// Asymptotic expansion e^z/z sum_k k!/z^k, stopped at the smallest term.
cplxl ei_asymptotic_ld(cplxl z) {
    cplxl term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        const cplxl next = term * (static_cast<long double>(k) / z);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum)) break;
    }
    return std::exp(z) / z * sum;
}

}  // namespace

double ei(double x) {
    if (x == 0.0 || !std::isfinite(x))
        throw domain_error("ei: argument must be finite and nonzero");
    const long double xl = x;
    if (x >= 40.0 || x <= -40.0) {
        const cplxl r = ei_asymptotic_ld(cplxl(xl, 0.0L));
        return static_cast<double>(r.real());
    }
    if (x < -6.0)
        return static_cast<double>(-e1_contfrac_ld(cplxl(-xl, 0.0L)).real());
    // Series gamma + log|x| + sum z^k/(k k!); for x in (0, 40] all the series
    // terms are positive so long double keeps full accuracy.
    const cplxl s = ei_series_sum_ld(cplxl(xl, 0.0L));
    return static_cast<double>(kEulerGamma + std::log(std::fabs(xl)) +
                               s.real());
}

cplx eit(cplx z) {
    if (z == cplx(0.0, 0.0)) throw domain_error("eit: pole at z = 0");
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
        throw domain_error("eit: non-finite argument");
    if (z.imag() == 0.0) return cplx(ei(z.real()), 0.0);
    const double az = std::abs(z);
    const cplxl zl(z.real(), z.imag());
    if (az <= 6.0) {
        const cplxl s = ei_series_sum_ld(zl);
        const cplxl lg = std::log(-zl);  // principal branch
        const cplxl r = kEulerGamma + lg + s;
        return cplx(static_cast<double>(r.real()),
                    static_cast<double>(r.imag()));
    }
    if (az > 40.0) {
        const cplxl r = ei_asymptotic_ld(zl);
        return cplx(static_cast<double>(r.real()),
                    static_cast<double>(r.imag()));
    }
    if (z.real() < 0.0) {
        const cplxl r = -e1_contfrac_ld(-zl);
        return cplx(static_cast<double>(r.real()),
                    static_cast<double>(r.imag()));
    }
    // Cancellation wedge Re z >= 0, 6 < |z| <= 40: the series loses up to
    // ~17 digits in double, so the sum runs in quad precision.
    double sr = 0.0, si = 0.0;
    ei_series_sum_q(z.real(), z.imag(), &sr, &si);
    const cplxl lg = std::log(-zl);
    const cplxl r = kEulerGamma + lg + cplxl(sr, si);
    return cplx(static_cast<double>(r.real()), static_cast<double>(r.imag()));
}

// ---------------------------------------------------------------------------
// Trivial-zero integral.
// ---------------------------------------------------------------------------

std::pair<double, double> trivial_zero_integral(double x) {
    if (!(x > 1.0) || !std::isfinite(x))
        throw domain_error("trivial_zero_integral: requires x > 1");
    const double y = std::log(x);
    double bound = std::exp(-3.0 * y);
    if (bound == 0.0) bound = std::numeric_limits<double>::denorm_min();
    if (3.0 * y >= 600.0) return {0.0, bound};

    // Substituting t = e^u turns the integrand into
    //   e^{-3u} / (u (1 - e^{-2u})),  u in [y, inf).
    const std::function<double(double)> f = [](double u) {
        return std::exp(-3.0 * u) / (u * (-std::expm1(-2.0 * u)));
    };
    double acc = 0.0;
    double u0 = y;
    for (int panel = 0; panel < 400; ++panel) {
        const double u1 = (u0 < 4.0) ? std::min(2.0 * u0, u0 + 4.0) : u0 + 4.0;
        acc += integrate(f, u0, u1, 1e-12, acc > 0 ? 1e-13 * acc : 0.0);
        u0 = u1;
        // Tail above u0 is below e^{-3u0}/(3 u0 (1-e^{-2u0})).
        const double tail =
            std::exp(-3.0 * u0) / (3.0 * u0 * (-std::expm1(-2.0 * u0)));
        if (tail < 1e-13 * acc) break;
    }
    return {acc, bound};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_floor) {
    return integrate_impl<double>(f, a, b, rel_tol, abs_floor);
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a,
                       double b, double rel_tol, double abs_floor) {
    return integrate_impl<cplx>(f, a, b, rel_tol, abs_floor);
}

}  // namespace mh
