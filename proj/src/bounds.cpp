#include "mh/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <string>

#include "mh/errors.hpp"

namespace mh {
namespace {

// Rigor model: every elementary operation whose rounding could matter is
// followed by a directed nudge of 2^-50 relative plus one 2^-1070 quantum.
// The relative part dominates the <= 2 ulp (2^-52 relative) error of any
// arithmetic step or libm call it covers; the absolute part keeps the nudge
// effective for results that underflow to subnormals or to zero, so that
// exp() of a very negative argument still yields a positive upper bound.
// This is cheaper than interval arithmetic and is verified in the tests by
// comparing against a higher-precision evaluation of each formula.
double up(double x) { return x + std::fabs(x) * 0x1p-50 + 0x1p-1070; }
double dn(double x) { return x - std::fabs(x) * 0x1p-50 - 0x1p-1070; }

// Sums in order, nudging every partial sum upward.
double add_up(std::initializer_list<double> terms) {
    double s = 0.0;
    for (double t : terms) s = up(s + t);
    return s;
}

constexpr double kLog2 = 0.69314718055994530942;

// log(sinh c) = c - log 2 + log1p(-e^{-2c}), overflow-free for any c >= 3.
// The _lo variant never exceeds the true value, the _hi variant never
// falls below it.
double log_sinh_lo(double c) {
    double e = up(std::exp(-2.0 * c));
    return dn(dn(c - up(kLog2)) + dn(std::log1p(-e)));
}

// log(cosh x) = x - log 2 + log1p(e^{-2x}); upper variant only.
double log_cosh_hi(double x) {
    double e = up(std::exp(-2.0 * x));
    return up(up(x - dn(kLog2)) + up(std::log1p(e)));
}

// exp with an upward nudge; exp(very negative) comes back as the smallest
// positive quantum rather than zero.
double exp_up(double x) { return up(std::exp(x)); }

// log(e^a + e^b) evaluated stably, rounded upward.
double log_add_exp_up(double a, double b) {
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return up(hi + up(std::log1p(up(std::exp(up(lo - hi))))));
}

// Truncates a positive value to two significant decimal digits (toward
// zero) by way of its decimal string, so the margin is a clean printed
// constant.  The re-parsed double may exceed the truncated decimal by half
// an ulp, which is swallowed by the preceding 1% haircut.
double round_down_two_sig(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    const char* e = std::strchr(buf, 'e');
    char out[16];
    std::snprintf(out, sizeof out, "%.3s%s", buf, e);
    return std::strtod(out, nullptr);
}

}  // namespace

const CertificationInput& CertificationInput::validated() const {
    if (!(std::isfinite(omega) && std::isfinite(eps) && std::isfinite(c) &&
          std::isfinite(H) && std::isfinite(a) && std::isfinite(T_sum)))
        throw parameter_error("certification input must be finite");
    if (!(eps > 0.0 && eps < 1e-3))
        throw parameter_error("smoothing half-width eps must lie in (0, 1e-3)");
    if (!(c >= 3.0))
        throw parameter_error("kernel sharpness c must be at least 3");
    if (!(omega - eps > 200.0))
        throw parameter_error("window must satisfy omega - eps > 200");
    if (!(H >= c / eps))
        throw parameter_error(
            "verified height H must reach the kernel cutoff c/eps");
    if (!(a > 0.0 && a < 1.0))
        throw parameter_error("cutoff fraction a must lie in (0, 1)");
    if (h != 0 && h != 1)
        throw parameter_error("critical-line flag h must be 0 or 1");
    if (!(T_sum >= 0.0 && T_sum <= c / eps))
        throw parameter_error("summed height T_sum must lie in [0, c/eps]");
    return *this;
}

double bound_e1(const CertificationInput& in) {
    in.validated();
    double ce = up(in.c * in.eps);
    double lterm = add_up({up(std::log(up(0.33))),
                           up(in.h * in.omega / 2.0),
                           up(up(0.71) * up(std::sqrt(ce))),
                           up(std::log(up(std::log(up(3.0 * in.c))))),
                           up(std::log(up(std::log(up(in.c / in.eps))))),
                           -log_sinh_lo(in.c)});
    return exp_up(lterm);
}

double bound_e2(const CertificationInput& in) {
    in.validated();
    double num = up(up(3.36) + up(126.0 * in.eps));
    double den = dn(1000.0 * dn(in.omega * in.omega));
    double first = up(num / den);

    // (e/(2H))^{omega/2-1}: the base is < 1 (H >= c/eps > e/2 always), so
    // the exponent is nudged down and the log of the base toward zero.
    double m = dn(in.omega / 2.0 - 1.0);
    double lbase = up(1.0 - dn(std::log(dn(2.0 * in.H))));
    double lsecond = add_up({up(std::log(up(2.8))),
                             up(m * lbase),
                             up(std::log(up(std::log(up(in.H)))))});
    return up(first + exp_up(lsecond));
}

double bound_e3(const CertificationInput& in) {
    in.validated();
    double ce = up(in.c * in.eps);
    double bracket1 = add_up({up(std::log(up(in.c))),
                              up(up(3.12) * up(std::sqrt(ce))),
                              -dn(std::log(dn(in.omega))),
                              -log_sinh_lo(in.c)});
    // (e*eps/omega)^{omega/2}: base < 1 on the validated box.
    double lbase = up(1.0 + up(std::log(up(in.eps))) - dn(std::log(dn(in.omega))));
    double bracket2 = up(dn(in.omega / 2.0) * lbase);
    double lterm = add_up({up(in.omega / 2.0),
                           -dn(std::log(dn(dn(1.99) * in.H))),
                           up(std::log(up(std::log(up(in.H))))),
                           log_add_exp_up(bracket1, bracket2)});
    return exp_up(lterm);
}

double bound_ace_tail(const CertificationInput& in) {
    in.validated();
    if (!(in.a * in.c / in.eps >= 1e3))
        throw parameter_error(
            "spectral tail bound requires a*c/eps of at least 1e3");
    double num = up(up(0.32) + up(up(3.51) * up(in.c * in.eps)));
    double den = dn(in.c * dn(in.a * in.a));
    double x = up(in.c * up(std::sqrt(up(1.0 - dn(in.a * in.a)))));
    double ratio = exp_up(up(log_cosh_hi(x) - log_sinh_lo(in.c)));
    double f = up(up(num / den) * up(std::log(up(in.c / in.eps))));
    return up(f * ratio);
}

double bound_rm(double x_log) {
    if (!(x_log > 200.0))
        throw domain_error(
            "prime-power remainder bound requires log x greater than 200");
    double e = exp_up(up(-x_log / 2.0));
    return up(up(up(1.0 + 5.3e-10) * e) / dn(x_log));
}

CertificationReport certify(const CertificationInput& in,
                            const WeightedZeroSum& sum) {
    in.validated();
    if (sum.omega.to_double() != in.omega)
        throw consistency_error(
            "zero sum was evaluated at a different window center omega");
    if (sum.params.c != in.c || sum.params.eps != in.eps)
        throw consistency_error(
            "zero sum was evaluated with different kernel parameters");
    if (sum.T != in.T_sum)
        throw consistency_error(
            "zero sum cutoff differs from the declared summed height");

    CertificationReport rep;
    rep.zero_sum = sum.value;
    rep.rm_term = 1.0 + 5.4e-10;
    rep.e1 = bound_e1(in);
    rep.e2 = bound_e2(in);
    rep.e3 = bound_e3(in);

    double cutoff = in.c / in.eps;
    bool complete = in.T_sum >= dn(cutoff);
    if (!complete) {
        // The sum stops short of the kernel cutoff; the spectral tail bound
        // covers ordinates in (a*c/eps, c/eps], so the summed height must
        // match a*c/eps (up to parsing noise) for the pieces to meet.
        double target = in.a * cutoff;
        if (!(std::fabs(in.T_sum - target) <= 1e-9 * target))
            throw consistency_error(
                "summed height does not equal a*(c/eps); the spectral tail "
                "bound would not cover the remaining ordinate range");
        rep.ace_tail = bound_ace_tail(in);
    }

    double bounds_total = add_up(
        {rep.rm_term, rep.e1, rep.e2, rep.e3, rep.ace_tail});
    // Plain (round-to-nearest) final addition: in the cancellation regime
    // that decides a certification the sum is exact, and keeping it plain
    // makes the report affine in the zero sum with unit slope.
    rep.total_upper_bound = rep.zero_sum + bounds_total;
    rep.verdict = rep.total_upper_bound < 0.0 ? Verdict::kNegativeCertified
                                              : Verdict::kInconclusive;
    return rep;
}

SignRegion propagate_interval(const CertificationReport& report,
                              const CertificationInput& in) {
    in.validated();
    if (report.verdict != Verdict::kNegativeCertified)
        throw verdict_error(
            "interval propagation requires a negativity-certified report");

    SignRegion region;
    region.x_lo = dd_sub(dd(in.omega), dd(in.eps));
    region.x_hi = dd_add(dd(in.omega), dd(in.eps));

    // One percent of the certified excess is given away, and the margin is
    // truncated to two significant decimal digits so it prints cleanly.
    double m = dn(std::fabs(report.total_upper_bound) * 0.99);
    double B = round_down_two_sig(m);
    if (!(B > 0.0))
        throw verdict_error(
            "certified margin rounds down to zero; nothing to propagate");
    region.margin = B;
    // The deviation stays negative while the drift of log log x, roughly
    // y / (x log x) after moving y below x, stays under margin / (sqrt(x)
    // log x) -- a run of length margin * sqrt(x).  Downward nudges keep the
    // guarantee understated.
    region.persistence_log =
        dn(dn(std::log(B)) + region.x_lo.to_double() / 2.0);
    return region;
}

const char* verdict_name(Verdict v) {
    return v == Verdict::kNegativeCertified ? "negative-certified"
                                            : "inconclusive";
}

std::string report_to_json(const CertificationReport& report,
                           const CertificationInput& in,
                           const char* zero_sum_source) {
    std::string s;
    s.reserve(512);
    char buf[64];
    auto num = [&](const char* key, double v, const char* sep) {
        std::snprintf(buf, sizeof buf, "\"%s\": %.17g%s", key, v, sep);
        s += buf;
    };
    s += "{\"schema\": \"mh-report-v1\", \"input\": {";
    num("omega", in.omega, ", ");
    num("eps", in.eps, ", ");
    num("c", in.c, ", ");
    num("H", in.H, ", ");
    num("a", in.a, ", ");
    std::snprintf(buf, sizeof buf, "\"h\": %d, ", in.h);
    s += buf;
    num("T_sum", in.T_sum, "}, ");
    s += "\"zero_sum_source\": \"";
    s += zero_sum_source;
    s += "\", ";
    num("zero_sum", report.zero_sum, ", ");
    num("e1", report.e1, ", ");
    num("e2", report.e2, ", ");
    num("e3", report.e3, ", ");
    num("ace_tail", report.ace_tail, ", ");
    num("rm_term", report.rm_term, ", ");
    num("total_upper_bound", report.total_upper_bound, ", ");
    s += "\"verdict\": \"";
    s += verdict_name(report.verdict);
    s += "\"}";
    return s;
}

}  // namespace mh
