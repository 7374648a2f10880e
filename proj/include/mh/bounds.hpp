#pragma once

#include <string>

#include "mh/dd.hpp"
#include "mh/zerosum.hpp"

namespace mh {

// Parameter set for certifying that the smoothed deviation is negative on
// the window [omega - eps, omega + eps] (all positions are logarithms of x).
struct CertificationInput {
    double omega = 0.0;  // window center, log scale
    double eps = 0.0;    // window half-width, log scale
    double c = 0.0;      // kernel sharpness
    double H = 0.0;      // height to which zero ordinates are verified on the
                         // critical line; must reach the kernel cutoff c/eps
    double a = 0.0;      // fraction of the cutoff actually summed over
    int h = 1;           // 0 = assume every zeta zero lies on the critical
                         // line, 1 = no such assumption
    double T_sum = 0.0;  // ordinate height covered by the computed zero sum

    // Returns *this; throws parameter_error when any invariant fails.
    const CertificationInput& validated() const;
};

enum class Verdict { kNegativeCertified, kInconclusive };

// Certified upper bound on the kernel-weighted mean of the deviation,
// assembled from the computed zero sum and the closed-form error bounds.
struct CertificationReport {
    double zero_sum = 0.0;           // value of the weighted zero sum
    double e1 = 0.0;                 // prime-power / far-zero remainder bound
    double e2 = 0.0;                 // small-argument expansion remainder
    double e3 = 0.0;                 // expansion tail above height H
    double ace_tail = 0.0;           // zeros between a*c/eps and c/eps
                                     // (zero when the sum reaches c/eps)
    double rm_term = 0.0;            // constant block from the squarefull
                                     // prime-power remainder
    double total_upper_bound = 0.0;  // zero_sum + rm_term + e1 + e2 + e3
                                     //          + ace_tail
    Verdict verdict = Verdict::kInconclusive;
};

// Certified x-region (log scale) on which the deviation stays negative.
struct SignRegion {
    dd x_lo;                      // log of the lower endpoint
    dd x_hi;                      // log of the upper endpoint
    double persistence_log = 0.0; // log of the guaranteed run length below
                                  // the sign change
    double margin = 0.0;          // certified deviation scale, rounded down
                                  // to two significant decimal digits
};

// Closed-form error bounds.  Each returns a rigorous upper bound on its
// formula value: every elementary step is nudged in the conservative
// direction (see the rigor model in the implementation).  Large parameter
// combinations may legitimately return +infinity.
double bound_e1(const CertificationInput& in);
double bound_e2(const CertificationInput& in);
double bound_e3(const CertificationInput& in);

// Bound on the paired-zero sum over ordinates in (a*c/eps, c/eps].
// Requires a*c/eps >= 1e3 in addition to the input invariants.
double bound_ace_tail(const CertificationInput& in);

// Upper bound on the squarefull prime-power remainder at log x = x_log,
// valid for x_log > 200 (throws domain_error otherwise).
double bound_rm(double x_log);

// Combines a computed zero sum with the error bounds into a verdict.
// The sum must have been computed at the same omega, kernel parameters,
// and cutoff declared in the input (consistency_error otherwise).  When
// T_sum stops short of c/eps it must equal a*(c/eps) so the spectral tail
// bound covers the gap.
CertificationReport certify(const CertificationInput& in,
                            const WeightedZeroSum& sum);

// Converts a negativity-certified report into the explicit x-region and a
// guaranteed persistence length.  Throws verdict_error on an inconclusive
// report or a degenerate margin.
SignRegion propagate_interval(const CertificationReport& report,
                              const CertificationInput& in);

// Flat JSON document (schema mh-report-v1) with every numeric field at 17
// significant digits plus an echo of the input; byte-deterministic.
// zero_sum_source records where the summed value came from ("computed", or
// "unverified input" when it was supplied rather than summed).
std::string report_to_json(const CertificationReport& report,
                           const CertificationInput& in,
                           const char* zero_sum_source = "computed");

const char* verdict_name(Verdict v);

}  // namespace mh
