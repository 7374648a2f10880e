#pragma once

#include <string>
#include <vector>

#include "mh/dd.hpp"
#include "mh/zeros.hpp"

namespace mh {

// A sub-threshold run of the oscillating zero sum, reported at its
// minimizing lattice point y = index * step.  The lattice is absolute
// (multiples of the step, not offsets from the scanned range), so candidate
// locations are reproducible across runs and range splits.
struct Candidate {
    long long index = 0;  // lattice position: y = index * step
    double y = 0.0;       // index * step, rounded to double
    double sigma = 0.0;   // oscillating sum at y, re-evaluated directly
    double T = 0.0;       // cutoff height the values were computed with
    double width = 0.0;   // extent of the run, (last - first) * step
};

// Evaluates the oscillating sum at every lattice point k*step inside
// [y_lo, y_hi] (endpoints inclusive) with cutoff T and reports each maximal
// run of values below the threshold as one Candidate at the run's
// minimizing point.  Runs separated by at most two above-threshold lattice
// steps are merged so threshold noise does not fragment one region.
// Throws parameter_error for an invalid range/step/threshold and
// coverage_error when T exceeds the loaded ordinate range.
std::vector<Candidate> scan(const ZeroSet& zs, double T, const dd& y_lo,
                            const dd& y_hi, const dd& step, double threshold);

// Re-scans the window [y - w, y + w], w = max(10 * cand.width, 1e-5), on
// the absolute step2 lattice with the larger cutoff T2 > cand.T.  Returns
// the window's global minimizer together with the extent of the run below
// -1 containing it (zero when the minimum stays above -1).
// Throws parameter_error when T2 does not exceed cand.T or the step does
// not resolve the window, coverage_error when T2 exceeds the dataset.
Candidate refine(const Candidate& cand, const ZeroSet& zs, double T2,
                 const dd& step2);

// CSV export (header y,sigma,T,width); y is printed from the exact lattice
// product index * step with frac_digits fractional digits.
std::string candidates_csv(const std::vector<Candidate>& cands,
                           const dd& step, int frac_digits);

}  // namespace mh
