// Fast sigma-grid evaluation: nonuniform-frequency trig sums via Gaussian
// gridding onto an oversampled fine grid plus one FFT.  For grid point
// y_k = y0 + k*dy the target is
//   sigma_k = 2 Re sum_j q_j e^{i gamma_j (y0 + k dy)},
// which after reducing x_j = gamma_j dy mod 2pi and folding the constant
// phases gamma_j y0 + K0 x_j into the coefficients becomes a uniform-output
// exponential sum  F_m = sum_j c_j e^{i m x_j},  m = k - K0 in [-n/2, n/2).
// Each source is smeared with a truncated periodic Gaussian of variance
// 2*tau onto M_r fine cells, the fine grid is transformed with FFTW, and
// the Gaussian is divided back out in frequency space.  Parameters (14
// cells half-width at 2x oversampling, tau = pi*14/(3 n^2)) put the
// combined aliasing and truncation error near 1e-12, well inside the 1e-9
// agreement contract with the direct evaluator.
//
// Accumulation order is fixed (sources in input order onto one fine grid;
// the parallel phase only precomputes per-source quantities), so results
// are bitwise identical for any worker-thread count.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "mh/util.hpp"
#include "mh/zerosum.hpp"

namespace mh {
namespace detail_fast {
namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr double kHalfWidthCells = 14.0;  // at 2x oversampling

// Smallest even 5-smooth integer >= target.
std::size_t next_fast_len(std::size_t target) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t p5 = 1; p5 <= 4 * target; p5 *= 5) {
        for (std::size_t p35 = p5; p35 <= 4 * target; p35 *= 3) {
            std::size_t v = 2 * p35;
            while (v < target) v *= 2;
            best = std::min(best, v);
            if (p35 > 2 * target) break;
        }
        if (p5 > 2 * target) break;
    }
    return best;
}

struct SpreadSource {
    long bin;     // nearest fine-grid cell
    double e1;    // exp(-delta^2 / 4 tau)
    double e2;    // exp(delta h / 2 tau); powers walk the Gaussian sideways
    cplx coef;    // q_j with all constant phases folded in
};

}  // namespace

std::vector<double> sigma_grid_fast(const double* g, std::size_t nz,
                                    const GridSpec& grid) {
    const std::size_t n = grid.n;
    const long k0_mode = static_cast<long>(n / 2);
    const std::size_t m_r = next_fast_len(std::max<std::size_t>(2 * n, 128));
    const double r_os = double(m_r) / double(n);
    const double tau =
        M_PI * kHalfWidthCells / (double(n) * double(n) * r_os * (r_os - 0.5));
    const long w_half = static_cast<long>(std::ceil(kHalfWidthCells * r_os / 2.0));
    const dd two_pi_dd{detail::TWO_PI_HI, detail::TWO_PI_MID};
    const dd h_dd = dd_div_d(two_pi_dd, double(m_r));
    const double h = h_dd.to_double();

    std::vector<double> gauss_cell(static_cast<std::size_t>(w_half) + 1);
    for (long s = 0; s <= w_half; ++s)
        gauss_cell[static_cast<std::size_t>(s)] =
            std::exp(-(s * h) * (s * h) / (4.0 * tau));

    std::vector<cplx> fine(m_r, cplx(0.0, 0.0));
    constexpr std::size_t kSrcChunk = std::size_t(1) << 18;
    constexpr std::size_t kPrecomputeBlock = 4096;
    std::vector<SpreadSource> buf;
    for (std::size_t c0 = 0; c0 < nz; c0 += kSrcChunk) {
        const std::size_t c1 = std::min(nz, c0 + kSrcChunk);
        buf.resize(c1 - c0);
        std::size_t n_blocks =
            (c1 - c0 + kPrecomputeBlock - 1) / kPrecomputeBlock;
        parallel_for_blocks(n_blocks, worker_threads(), [&](std::size_t b) {
            std::size_t i0 = c0 + b * kPrecomputeBlock;
            std::size_t i1 = std::min(c1, i0 + kPrecomputeBlock);
            for (std::size_t i = i0; i < i1; ++i) {
                const double gamma = g[i];
                double p = reduce_mod_2pi(dd_mul_d(grid.dy, gamma));
                double x = p < 0.0 ? p + kTwoPi : p;
                if (!(x < kTwoPi)) x = 0.0;
                double a1 = reduce_mod_2pi(dd_mul_d(grid.y0, gamma));
                double a2 = reduce_mod_2pi(dd_mul_d(dd(x), double(k0_mode)));
                double alpha = a1 + a2;
                double d = 0.25 + gamma * gamma;
                cplx q(0.5 / d, gamma / d);  // 1/(1/2 - i gamma)
                long bin = static_cast<long>(std::floor(x / h + 0.5));
                // Exact offset from the bin center; a plain double product
                // bin*h would already cost ~1e-11 of relative weight error.
                double delta =
                    dd_sub(dd(x), dd_mul_d(h_dd, double(bin))).to_double();
                SpreadSource& s = buf[i - c0];
                s.bin = bin;
                s.e1 = std::exp(-delta * delta / (4.0 * tau));
                s.e2 = std::exp(delta * h / (2.0 * tau));
                s.coef = q * cplx(std::cos(alpha), std::sin(alpha));
            }
        });
        for (const SpreadSource& s : buf) {
            const cplx ce = s.coef * s.e1;
            double pw = 1.0;
            for (long t = 0; t <= w_half; ++t) {
                long idx = s.bin + t;
                if (idx >= static_cast<long>(m_r)) idx -= m_r;
                fine[static_cast<std::size_t>(idx)] +=
                    ce * (pw * gauss_cell[static_cast<std::size_t>(t)]);
                pw *= s.e2;
            }
            const double inv = 1.0 / s.e2;
            pw = inv;
            for (long t = 1; t <= w_half; ++t) {
                long idx = s.bin - t;
                if (idx < 0) idx += m_r;
                fine[static_cast<std::size_t>(idx)] +=
                    ce * (pw * gauss_cell[static_cast<std::size_t>(t)]);
                pw *= inv;
            }
        }
    }

    fftw_complex* in = fftw_alloc_complex(m_r);
    fftw_complex* out = fftw_alloc_complex(m_r);
    if (!in || !out) {
        fftw_free(in);
        fftw_free(out);
        throw range_error("sigma fast: fine grid allocation failed");
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m_r), in, out,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    std::memcpy(in, fine.data(), m_r * sizeof(cplx));
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<double> res(n);
    const double norm = (kTwoPi / double(m_r)) / std::sqrt(4.0 * M_PI * tau);
    for (std::size_t k = 0; k < n; ++k) {
        long m = static_cast<long>(k) - k0_mode;
        long idx = m % static_cast<long>(m_r);
        if (idx < 0) idx += m_r;
        double re = out[idx][0];
        res[k] = 2.0 * norm * std::exp(tau * double(m) * double(m)) * re;
    }
    fftw_free(in);
    fftw_free(out);
    return res;
}

}  // namespace detail_fast
}  // namespace mh
