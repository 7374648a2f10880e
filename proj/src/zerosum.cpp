#include "mh/zerosum.hpp"

#include <algorithm>
#include <cmath>

#include "mh/util.hpp"

namespace mh {
namespace {

constexpr std::size_t kZeroBlock = 4096;

// Folded conjugate-pair term of sigma: 2*Re(e^{i phase}/(1/2 - i g)).
inline double sigma_pair_term(double g, double phase) {
    double c = std::cos(phase);
    double s = std::sin(phase);
    return 2.0 * (0.5 * c - g * s) / (0.25 + g * g);
}

// Number of leading ordinates with gamma <= T.
std::size_t cutoff_index(const ZeroSet& zs, double T) {
    return static_cast<std::size_t>(
        std::upper_bound(zs.gammas.begin(), zs.gammas.end(), T) -
        zs.gammas.begin());
}

// Sequential block-folded sigma at one point; the building block both the
// single-point and the grid evaluators share, so they agree bitwise.
double sigma_point(const double* g, std::size_t n, const dd& y) {
    neumaier fold;
    for (std::size_t b = 0; b < n; b += kZeroBlock) {
        std::size_t e = std::min(n, b + kZeroBlock);
        neumaier acc;
        for (std::size_t i = b; i < e; ++i)
            acc.add(sigma_pair_term(g[i], phase_mod_2pi(g[i], y)));
        fold.add(acc.total());
    }
    return fold.total();
}

void check_sigma_pre(const ZeroSet& zs, double T) {
    if (!std::isfinite(T) || T < 0.0)
        throw parameter_error("sigma: cutoff T must be finite and >= 0");
    if (T > zs.max_gamma())
        throw coverage_error(
            "sigma: cutoff T exceeds the loaded ordinate range (max " +
            std::to_string(zs.max_gamma()) + ")");
}

double phase_error_bound(double T, double omega) {
    // dd product relative error ~1e-31 plus the reduction's own ~1e-19.
    return 1e-18 + 3e-30 * std::abs(T) * std::abs(omega);
}

}  // namespace

const GridSpec& GridSpec::validated() const {
    if (n < 1) throw parameter_error("grid: need at least one point");
    if (!(dy.hi > 0.0) || !std::isfinite(dy.hi))
        throw parameter_error("grid: step must be positive");
    if (dd_less(y0, dd(1.0)) || !std::isfinite(y0.hi))
        throw parameter_error("grid: origin must be >= 1");
    return *this;
}

double sigma_at(const ZeroSet& zs, double T, const dd& y) {
    check_sigma_pre(zs, T);
    std::size_t n = cutoff_index(zs, T);
    return sigma_point(zs.gammas.data(), n, y);
}

namespace detail_fast {
// Implemented in zerosum_fast.cpp.
std::vector<double> sigma_grid_fast(const double* g, std::size_t n_zeros,
                                    const GridSpec& grid);
}

std::vector<double> sigma_grid(const ZeroSet& zs, double T,
                               const GridSpec& grid, SigmaMode mode) {
    grid.validated();
    check_sigma_pre(zs, T);
    std::size_t nz = cutoff_index(zs, T);

    // Tiny grids gain nothing from the FFT path; keep it for real workloads.
    if (mode == SigmaMode::kFast && grid.n >= 64 && nz > 0)
        return detail_fast::sigma_grid_fast(zs.gammas.data(), nz, grid);

    std::vector<double> out(grid.n);
    constexpr std::size_t kPointChunk = 64;
    std::size_t n_chunks = (grid.n + kPointChunk - 1) / kPointChunk;
    parallel_for_blocks(n_chunks, worker_threads(), [&](std::size_t c) {
        std::size_t k0 = c * kPointChunk;
        std::size_t k1 = std::min(grid.n, k0 + kPointChunk);
        for (std::size_t k = k0; k < k1; ++k) {
            dd y = dd_add(grid.y0, dd_mul_d(grid.dy, double(k)));
            out[k] = sigma_point(zs.gammas.data(), nz, y);
        }
    });
    return out;
}

WeightedZeroSum kernel_weighted_sum(const ZeroSet& zs, const dd& omega,
                                    const KernelParams& params, double T) {
    KernelParams::validated(params.c, params.eps);
    if (!std::isfinite(T) || T < 0.0)
        throw parameter_error("weighted sum: cutoff T must be finite, >= 0");
    if (T > params.c / params.eps)
        throw parameter_error(
            "weighted sum: cutoff T exceeds the kernel band limit c/eps");
    double w = omega.to_double();
    if (!(w - params.eps > 200.0))
        throw parameter_error(
            "weighted sum: need omega - eps > 200 for the error bounds");
    if (T > zs.max_gamma())
        throw coverage_error(
            "weighted sum: cutoff T exceeds the loaded ordinate range");

    std::size_t n = cutoff_index(zs, T);
    const double* g = zs.gammas.data();
    std::size_t n_blocks = (n + kZeroBlock - 1) / kZeroBlock;
    std::vector<double> partial(n_blocks, 0.0);
    parallel_for_blocks(n_blocks, worker_threads(), [&](std::size_t b) {
        std::size_t i0 = b * kZeroBlock;
        std::size_t i1 = std::min(n, i0 + kZeroBlock);
        neumaier acc;
        for (std::size_t i = i0; i < i1; ++i) {
            double gamma = g[i];
            double phase = phase_mod_2pi(gamma, omega);
            double ell = logan_ell(params.c, params.eps * gamma);
            double d = 0.25 + gamma * gamma;
            cplx q(0.5 / d, -gamma / d);  // 1/rho
            cplx z = q * (1.0 - q / w);   // 1/rho - 1/(omega rho^2)
            // 2*Re(e^{-i phase} z) = 2(cos(phase) Re z + sin(phase) Im z)
            acc.add(2.0 * ell *
                    (std::cos(phase) * z.real() + std::sin(phase) * z.imag()));
        }
        partial[b] = acc.total();
    });
    neumaier fold;
    for (double p : partial) fold.add(p);

    WeightedZeroSum res;
    res.value = fold.total();
    res.T = T;
    res.omega = omega;
    res.params = params;
    res.phase_precision = phase_error_bound(T, w);
    if (!(res.phase_precision <= 1e-9))
        throw consistency_error(
            "weighted sum: phase error bound exceeds the 1e-9 guarantee");
    return res;
}

cplx phi_quadrature(double omega, const KernelParams& params, cplx rho,
                    double a) {
    KernelParams::validated(params.c, params.eps);
    if (!(params.eps < omega) || !(omega > 0.0))
        throw parameter_error("phi: need 0 < eps < omega");
    if (!(a >= 0.0 && a <= 1.0))
        throw parameter_error("phi: tilt a must lie in [0, 1]");
    if (!(rho.real() >= 0.0 && rho.real() <= 1.0))
        throw parameter_error("phi: Re(rho) must lie in [0, 1]");
    if (rho.imag() == 0.0)
        throw parameter_error("phi: rho must be off the real axis");
    if (std::abs(0.5 - a) * (omega + params.eps) > 690.0)
        throw range_error("phi: exponential tilt overflows a double");

    // Integrate in the offset t = y - omega: the kernel argument is then
    // formed exactly instead of through the cancellation y - omega, which
    // for eps near 1e-8 would cost ~1e-6 of relative accuracy.
    auto f = [&](double t) -> cplx {
        double k = kernel_k(params, t);
        if (k == 0.0) return cplx(0.0, 0.0);
        double y = omega + t;
        return k * y * std::exp((0.5 - a) * y) * eit((a - rho) * y);
    };
    return integrate_complex(f, -params.eps, params.eps, 1e-8);
}

PhiExpansion phi_expansion(double omega, const KernelParams& params, cplx rho,
                           int k, int m, double a) {
    KernelParams::validated(params.c, params.eps);
    if (k < 1) throw parameter_error("phi expansion: need k >= 1");
    if (m < 0) throw parameter_error("phi expansion: need m >= 0");
    double e_eps = M_E * params.eps;
    if (!(e_eps < omega))
        throw parameter_error("phi expansion: need e*eps < omega");
    if (!(a >= 0.0 && a <= 1.0))
        throw parameter_error("phi expansion: tilt a must lie in [0, 1]");
    double beta = rho.real();
    double gamma = rho.imag();
    if (!(beta >= 0.0 && beta <= 1.0))
        throw parameter_error("phi expansion: Re(rho) must lie in [0, 1]");
    if (gamma == 0.0)
        throw parameter_error("phi expansion: rho must be off the real axis");
    if (std::abs(0.5 - beta) * omega > 690.0)
        throw range_error("phi expansion: exponential factor overflows");

    // e^{(1/2-rho) omega} with the phase gamma*omega reduced in dd.
    double phase = phase_mod_2pi(gamma, dd(omega));
    double growth = std::exp((0.5 - beta) * omega);
    cplx E = growth * cplx(std::cos(phase), -std::sin(phase));
    // Transform argument (rho - 1/2)/i.
    cplx gt(gamma, 0.5 - beta);

    PhiExpansion res;
    res.terms.resize(static_cast<std::size_t>(k));
    cplx ra = rho - a;
    cplx ra_pow = ra;  // (rho - a)^j
    double factorial = 1.0;
    for (int j = 1; j <= k; ++j) {
        cplx fj;  // F^{(-j)}(0), m-truncated for j >= 2
        if (j == 1) {
            fj = -E * logan(params, gt);
        } else {
            cplx s(0.0, 0.0);
            double binom = 1.0;  // C(n+j-2, n), built up over n
            double omega_pow = std::pow(omega, j - 1);
            cplx minus_i_pow(1.0, 0.0);
            for (int n = 0; n <= m; ++n) {
                if (n > 0) {
                    binom *= double(n + j - 2) / double(n);
                    minus_i_pow *= cplx(0.0, -1.0);
                    omega_pow *= omega;
                }
                s += binom * minus_i_pow * logan_derivative(params, n, gt) /
                     omega_pow;
            }
            fj = ((j % 2 == 0) ? 1.0 : -1.0) * E * s;
        }
        if (j > 1) factorial *= double(j - 1);
        res.terms[static_cast<std::size_t>(j - 1)] = factorial * fj / ra_pow;
        if (j < k) ra_pow *= ra;
    }

    // Remainder: the k-truncation of the outer expansion plus, for each
    // j >= 2, the m-truncation of the 1/omega series.
    double abs_gamma = std::abs(gamma);
    double k_fact = 1.0;
    for (int j = 2; j <= k; ++j) k_fact *= double(j);
    double theta = k_fact * std::exp(0.5 * params.eps) * growth /
                   (std::pow(omega - params.eps, k) *
                    std::pow(abs_gamma, k + 1));
    double abs_ra = std::abs(ra);
    double ratio = e_eps / omega;
    double m_tail_geom = std::pow(ratio, m + 1) / (1.0 - ratio);
    double jfact = 1.0;
    for (int j = 2; j <= k; ++j) {
        jfact *= double(j - 1);
        theta += jfact * std::exp(double(j - 2) + 0.5 * params.eps) * growth *
                 m_tail_geom /
                 (std::pow(abs_ra, j) * std::pow(omega, j - 1));
    }
    res.theta_bound = theta;
    return res;
}

}  // namespace mh
