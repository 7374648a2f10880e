#include "zero_finder.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zeta_z.hpp"

namespace mh::support {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Solves theta(t) = n*pi by Newton iteration; quadratic convergence makes
// six steps ample from any seed within a few units.
double gram_point(long long n, double seed) {
    double t = seed;
    for (int i = 0; i < 6; ++i)
        t -= (theta(t) - double(n) * kPi) / theta_derivative(t);
    return t;
}

// Gram's heuristic: Z at the n-th Gram point has sign (-1)^n.  Demand
// clearance well above the evaluator's error band, so an ambiguous value is
// merely treated as irregular and enlarges the enclosing block (which keeps
// the zero count per block intact) instead of corrupting the bookkeeping.
bool regular(long long n, double z) {
    const double signed_z = (n % 2 == 0) ? z : -z;
    return signed_z > 1e-5;
}

// Finds exactly `want` zeros inside a block delimited by regular Gram
// points, subdividing each Gram interval until every sign change is
// isolated.  gp holds the block's Gram boundaries, gz the Z values there.
std::vector<double> hunt_block(const std::vector<double>& gp,
                               const std::vector<double>& gz,
                               std::size_t want) {
    const std::size_t intervals = gp.size() - 1;
    for (long long mesh = 1; mesh <= (1LL << 14); mesh *= 2) {
        std::vector<std::pair<double, double>> brackets;
        for (std::size_t i = 0; i < intervals; ++i) {
            const double t0 = gp[i], t1 = gp[i + 1];
            double prev_t = t0, prev_z = gz[i];
            for (long long j = 1; j <= mesh; ++j) {
                const double tj =
                    (j == mesh) ? t1 : t0 + (t1 - t0) * (double(j) / double(mesh));
                const double zj = (j == mesh) ? gz[i + 1] : z_value(tj);
                if ((prev_z < 0.0) != (zj < 0.0)) brackets.emplace_back(prev_t, tj);
                prev_t = tj;
                prev_z = zj;
            }
        }
        if (brackets.size() > want)
            throw std::runtime_error(
                "zero finder: more sign changes than zeros near t = " +
                std::to_string(gp.front()));
        if (brackets.size() == want) {
            std::vector<double> zs;
            zs.reserve(want);
            for (const auto& [lo, hi] : brackets) {
                boost::uintmax_t iters = 128;
                const auto r = boost::math::tools::toms748_solve(
                    [](double t) { return z_value(t); }, lo, hi,
                    [](double a, double b) { return b - a < 1e-10; }, iters);
                zs.push_back(0.5 * (r.first + r.second));
            }
            return zs;
        }
    }
    throw std::runtime_error("zero finder: mesh exhausted near t = " +
                             std::to_string(gp.front()));
}

}  // namespace

std::vector<double> find_zeros(double t_max,
                               void (*progress)(std::size_t, double)) {
    if (!(t_max >= 15.0) || !(t_max <= 1.05e6))
        throw std::runtime_error(
            "find_zeros: t_max outside the validated range [15, 1.05e6]");

    std::vector<double> zeros;
    zeros.reserve(
        std::size_t(t_max / kPi * std::log(t_max / (2.0 * kPi)) / 2.0) + 64);

    // Start one Gram index before the first zero; the walk ends at the first
    // regular Gram point past t_max, where the cumulative count must equal
    // the counting function's value n + 1.
    long long n = -1;
    double g = gram_point(n, 9.6669);
    double zg = z_value(g);
    if (!regular(n, zg))
        throw std::runtime_error("zero finder: irregular starting Gram point");

    std::vector<double> block_t{g};
    std::vector<double> block_z{zg};
    std::size_t next_report = 100000;
    for (;;) {
        ++n;
        g = gram_point(n, g + kPi / theta_derivative(g));
        zg = z_value(g);
        block_t.push_back(g);
        block_z.push_back(zg);
        if (!regular(n, zg)) continue;

        const std::vector<double> found =
            hunt_block(block_t, block_z, block_t.size() - 1);
        zeros.insert(zeros.end(), found.begin(), found.end());
        block_t.assign(1, g);
        block_z.assign(1, zg);

        if (progress && zeros.size() >= next_report) {
            progress(zeros.size(), g);
            next_report += 100000;
        }
        if (g >= t_max) {
            if (zeros.size() != std::size_t(n) + 1)
                throw std::runtime_error(
                    "zero finder: found " + std::to_string(zeros.size()) +
                    " zeros below the anchor but the counting function gives " +
                    std::to_string(n + 1));
            while (!zeros.empty() && zeros.back() > t_max) zeros.pop_back();
            return zeros;
        }
    }
}

}  // namespace mh::support
