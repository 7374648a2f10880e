#include "mh/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "mh/errors.hpp"
#include "mh/zerosum.hpp"

namespace mh {
namespace {

// Grid points evaluated per transform call; bounds the working memory of
// the oversampled fine grid while keeping the per-call setup cost amortized.
constexpr long long kChunk = 1LL << 23;

// Runs separated by at most this many above-threshold steps are merged.
constexpr long long kMergeGap = 2;

// Smallest integer k with k*step >= y.  The double estimate is off by at
// most a few units, so nudging against exact double-double comparisons
// terminates immediately.
long long lattice_ceil(const dd& y, const dd& step) {
    long long k = std::llround(dd_div(y, step).to_double());
    while (dd_less(dd_mul_d(step, double(k)), y)) ++k;
    while (!dd_less(dd_mul_d(step, double(k - 1)), y)) --k;
    return k;
}

// Largest integer k with k*step <= y.
long long lattice_floor(const dd& y, const dd& step) {
    long long k = std::llround(dd_div(y, step).to_double());
    while (dd_less(y, dd_mul_d(step, double(k)))) --k;
    while (!dd_less(y, dd_mul_d(step, double(k + 1)))) ++k;
    return k;
}

struct Run {
    bool open = false;
    long long first = 0;
    long long last = 0;
    long long argmin = 0;
    double min_sigma = 0.0;
};

void check_step(const dd& step) {
    if (!(step.hi > 0.0) || !std::isfinite(step.hi))
        throw parameter_error("lattice step must be positive and finite");
}

void check_cutoff(const ZeroSet& zs, double T) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw parameter_error("cutoff T must be finite and non-negative");
    if (T > zs.max_gamma())
        throw coverage_error(
            "cutoff T exceeds the loaded ordinate range (max " +
            std::to_string(zs.max_gamma()) + ")");
}

// Walks the lattice range [k_lo, k_hi] in chunks, hands every value to
// visit(k, sigma_k).  Values come from the fast grid evaluator.
template <typename Visit>
void walk_grid(const ZeroSet& zs, double T, const dd& step, long long k_lo,
               long long k_hi, Visit&& visit) {
    for (long long ka = k_lo; ka <= k_hi; ka += kChunk) {
        long long kb = std::min(k_hi, ka + kChunk - 1);
        GridSpec grid{dd_mul_d(step, double(ka)), step,
                      static_cast<std::size_t>(kb - ka + 1)};
        std::vector<double> vals = sigma_grid(zs, T, grid, SigmaMode::kFast);
        for (long long k = ka; k <= kb; ++k) visit(k, vals[k - ka]);
    }
}

}  // namespace

std::vector<Candidate> scan(const ZeroSet& zs, double T, const dd& y_lo,
                            const dd& y_hi, const dd& step, double threshold) {
    check_step(step);
    check_cutoff(zs, T);
    if (!std::isfinite(threshold))
        throw parameter_error("threshold must be finite");
    if (!std::isfinite(y_lo.hi) || !std::isfinite(y_hi.hi))
        throw parameter_error("scan range must be finite");
    if (dd_less(y_lo, dd(1.0)))
        throw parameter_error("scan range must start at 1 or above");
    if (dd_less(y_hi, y_lo))
        throw parameter_error("scan range is empty");

    long long k_lo = lattice_ceil(y_lo, step);
    long long k_hi = lattice_floor(y_hi, step);

    std::vector<Candidate> out;
    Run run;
    auto emit = [&](const Run& r) {
        dd y = dd_mul_d(step, double(r.argmin));
        // Report the direct single-point sum so every published value is
        // independent of the grid evaluation path.  If the re-evaluation
        // lands on the other side of the threshold (possible only within
        // the grid evaluator's error band), the run was never robustly
        // below it and is dropped.
        double direct = sigma_at(zs, T, y);
        if (!(direct < threshold)) return;
        out.push_back({r.argmin, y.to_double(), direct, T,
                       dd_mul_d(step, double(r.last - r.first)).to_double()});
    };

    walk_grid(zs, T, step, k_lo, k_hi, [&](long long k, double v) {
        if (!(v < threshold)) return;
        if (run.open && k - run.last <= kMergeGap + 1) {
            run.last = k;
            if (v < run.min_sigma) {
                run.min_sigma = v;
                run.argmin = k;
            }
            return;
        }
        if (run.open) emit(run);
        run = {true, k, k, k, v};
    });
    if (run.open) emit(run);
    return out;
}

Candidate refine(const Candidate& cand, const ZeroSet& zs, double T2,
                 const dd& step2) {
    check_step(step2);
    check_cutoff(zs, T2);
    if (!(T2 > cand.T))
        throw parameter_error(
            "refinement cutoff must exceed the candidate's cutoff");
    if (!std::isfinite(cand.y) || !(cand.width >= 0.0))
        throw parameter_error("candidate location/width is invalid");

    double w = std::max(10.0 * cand.width, 1e-5);
    dd lo = dd_add_d(dd(cand.y), -w);
    if (dd_less(lo, dd(1.0))) lo = dd(1.0);
    dd hi = dd_add_d(dd(cand.y), w);
    long long k_lo = lattice_ceil(lo, step2);
    long long k_hi = lattice_floor(hi, step2);
    if (k_hi < k_lo)
        throw parameter_error("refinement step does not resolve the window");

    long long argmin = k_lo;
    double min_sigma = std::numeric_limits<double>::infinity();
    std::vector<Run> deep;  // runs below -1, the certification watermark
    Run run;
    auto close = [&](const Run& r) { deep.push_back(r); };

    walk_grid(zs, T2, step2, k_lo, k_hi, [&](long long k, double v) {
        if (v < min_sigma) {
            min_sigma = v;
            argmin = k;
        }
        if (!(v < -1.0)) return;
        if (run.open && k - run.last <= kMergeGap + 1) {
            run.last = k;
            return;
        }
        if (run.open) close(run);
        run = {true, k, k, k, v};
    });
    if (run.open) close(run);

    double width = 0.0;
    for (const Run& r : deep)
        if (r.first <= argmin && argmin <= r.last) {
            width = dd_mul_d(step2, double(r.last - r.first)).to_double();
            break;
        }

    dd y = dd_mul_d(step2, double(argmin));
    return {argmin, y.to_double(), sigma_at(zs, T2, y), T2, width};
}

std::string candidates_csv(const std::vector<Candidate>& cands,
                           const dd& step, int frac_digits) {
    std::string s = "y,sigma,T,width\n";
    char buf[128];
    for (const Candidate& c : cands) {
        s += dd_to_decimal_string(dd_mul_d(step, double(c.index)), frac_digits);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", c.sigma, c.T,
                      c.width);
        s += buf;
    }
    return s;
}

}  // namespace mh
