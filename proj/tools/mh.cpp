// mh: command-line driver wiring the library modules together — dataset
// ingestion and validation, lattice scans and refinement, certification
// arithmetic, sieve/formula cross-checks, and constants output.
//
// Conventions enforced here:
//   * The primary output (stdout, or the --output file) is byte-identical
//     across reruns with the same flags and data.  Progress notes and the
//     elapsed-time footer go to stderr.
//   * Every floating value is printed with 17 significant digits so it
//     round-trips exactly.
//   * Exit codes partition by failure kind: 0 success/certified,
//     1 inconclusive, 2 format, 3 safety, 4 coverage, 5 precondition,
//     70 internal.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "mh/bounds.hpp"
#include "mh/dd.hpp"
#include "mh/errors.hpp"
#include "mh/primes.hpp"
#include "mh/search.hpp"
#include "mh/specfun.hpp"
#include "mh/util.hpp"
#include "mh/zeros.hpp"
#include "mh/zerosum.hpp"

namespace {

using mh::dd;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string u64s(std::uint64_t v) {
    return std::to_string(static_cast<unsigned long long>(v));
}

// ------------------------------------------------------------ plumbing ----

int exit_code_for(const mh::error& e) {
    if (dynamic_cast<const mh::format_error*>(&e) != nullptr ||
        dynamic_cast<const mh::order_error*>(&e) != nullptr ||
        dynamic_cast<const mh::corruption_error*>(&e) != nullptr)
        return 2;
    if (dynamic_cast<const mh::safety_error*>(&e) != nullptr) return 3;
    if (dynamic_cast<const mh::coverage_error*>(&e) != nullptr) return 4;
    return 5;  // parameter/domain/range/precision/accuracy/consistency/
               // verdict: some precondition of the computation failed
}

// Bare cache names resolve against MH_CACHE_DIR; anything with a slash is
// used as given.
std::string resolve_cache(const std::string& name) {
    if (name.find('/') != std::string::npos) return name;
    if (const char* dir = std::getenv("MH_CACHE_DIR"); dir != nullptr && *dir)
        return std::string(dir) + "/" + name;
    return name;
}

// The computing commands treat an absent cache as missing coverage (the
// requested computation needs data that is not there), distinct from a
// malformed parameter.
mh::ZeroSet load_cache(const std::string& name) {
    const std::string path = resolve_cache(name);
    if (!std::filesystem::exists(path))
        throw mh::coverage_error("zero cache not found: " + path);
    mh::ZeroSet zs = mh::cache_read(path);
    std::fprintf(stderr, "loaded %zu ordinates up to %.6f from %s\n",
                 zs.count(), zs.max_gamma(), path.c_str());
    return zs;
}

// Decimal flag values are exact-decimal strings; a typo is a bad parameter,
// not a data-format failure.
dd parse_flag_dd(const char* flag, const std::string& text) {
    try {
        return mh::parse_decimal_dd(text);
    } catch (const mh::format_error& e) {
        throw mh::parameter_error(std::string(flag) + ": " + e.what());
    }
}

std::string pick_format(std::string requested, const char* fallback,
                        std::initializer_list<const char*> allowed) {
    if (requested.empty()) requested = fallback;
    for (const char* a : allowed)
        if (requested == a) return requested;
    throw mh::parameter_error("unsupported --format '" + requested +
                              "' for this command");
}

// Smallest fractional digit count that prints the lattice exactly (step *
// 10^d integral), capped so |y_hi| * 10^d stays in the exact decimal
// printing range.  Steps that are not decimal fractions fall back to the
// cap.
int lattice_frac_digits(const dd& step, double y_hi) {
    const double mag = std::max(1.0, std::abs(y_hi));
    int cap = static_cast<int>(std::floor(std::log10(4.0e18 / mag)));
    cap = std::clamp(cap, 0, 17);
    for (int d = 0; d <= cap; ++d) {
        dd scaled = mh::dd_mul(step, mh::dd_pow10(d));
        if (scaled.hi == std::nearbyint(scaled.hi) &&
            std::abs(scaled.lo) <= 1e-18 * std::abs(scaled.hi))
            return d;
    }
    return cap;
}

// Groups candidates whose consecutive gaps are at most `radius` and keeps
// only the deepest member of each group.  Radius 0 disables grouping.  Used
// to report one row per dip region when the lattice-scale run merging of
// the scanner intentionally keeps nearby runs separate.
std::vector<mh::Candidate> cluster_candidates(std::vector<mh::Candidate> cands,
                                              double radius) {
    if (!(radius > 0.0) || cands.size() < 2) return cands;
    std::vector<mh::Candidate> out;
    std::size_t i = 0;
    while (i < cands.size()) {
        std::size_t j = i;
        std::size_t best = i;
        while (j + 1 < cands.size() &&
               cands[j + 1].y - cands[j].y <= radius) {
            ++j;
            if (cands[j].sigma < cands[best].sigma) best = j;
        }
        out.push_back(cands[best]);
        i = j + 1;
    }
    return out;
}

void emit_candidates(const std::vector<mh::Candidate>& cands, const dd& step,
                     double y_hi, double T, const std::string& fmt,
                     std::string& out) {
    const int frac = lattice_frac_digits(step, y_hi);
    auto lattice_y = [&](const mh::Candidate& c) {
        return mh::dd_to_decimal_string(
            mh::dd_mul_d(step, static_cast<double>(c.index)), frac);
    };
    if (fmt == "csv") {
        out += mh::candidates_csv(cands, step, frac);
        return;
    }
    if (fmt == "json") {
        out += "{\"schema\": \"mh-candidates-v1\", \"T\": " + g17(T) +
               ", \"step\": " + mh::dd_to_decimal_string(step, frac) +
               ", \"count\": " + std::to_string(cands.size()) +
               ", \"candidates\": [";
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (i) out += ", ";
            out += "{\"index\": " + std::to_string(cands[i].index) +
                   ", \"y\": " + lattice_y(cands[i]) +
                   ", \"sigma\": " + g17(cands[i].sigma) +
                   ", \"width\": " + g17(cands[i].width) + "}";
        }
        out += "]}\n";
        return;
    }
    for (const mh::Candidate& c : cands)
        out += "candidate: y=" + lattice_y(c) + " sigma=" + g17(c.sigma) +
               " T=" + g17(c.T) + " width=" + g17(c.width) + "\n";
    out += "candidates: " + std::to_string(cands.size()) + "\n";
}

// ------------------------------------------------------ zeros commands ----

struct ImportParams {
    std::string path;
    std::string format = "plain-text";
    std::string cache;
    double precision = 0.0;
    double rh_height = 0.0;
    bool force = false;
};

void append_set_summary(const std::string& cache_path, const mh::ZeroSet& zs,
                        std::string& out) {
    out += "cache: " + cache_path + "\n";
    out += "count: " + std::to_string(zs.count()) + "\n";
    out += "max_ordinate: " + g17(zs.max_gamma()) + "\n";
    out += "precision: " + g17(zs.precision) + "\n";
    out += "rh_verified_height: " + g17(zs.rh_verified_height) + "\n";
}

int run_zeros_import(const ImportParams& p, const std::string& fmt_flag,
                     std::string& out) {
    (void)pick_format(fmt_flag, "text", {"text"});
    std::string cache = p.cache;
    if (cache.empty())
        cache = std::filesystem::path(p.path).stem().string() + ".mhz1";
    cache = resolve_cache(cache);
    if (std::filesystem::exists(cache) && !p.force)
        throw mh::safety_error("cache already exists: " + cache +
                               " (pass --force to overwrite)");
    const mh::ZeroFormat fmt = p.format == "plain-text"
                                   ? mh::ZeroFormat::kPlainText
                                   : mh::ZeroFormat::kPairedText;
    mh::ZeroSet zs = mh::import_zeros(p.path, fmt, p.precision, p.rh_height);
    mh::ZeroValidationReport rep = mh::validate(zs);
    if (!rep.ok()) {
        for (const std::string& v : rep.violations)
            std::fprintf(stderr, "violation: %s\n", v.c_str());
        throw mh::format_error("zero table failed validation: " +
                               rep.violations.front());
    }
    mh::cache_write(zs, cache);
    append_set_summary(cache, zs, out);
    return 0;
}

int run_zeros_validate(const std::string& cache_flag,
                       const std::string& fmt_flag, std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "text", {"text", "json"});
    const std::string path = resolve_cache(cache_flag);
    mh::ZeroSet zs = mh::cache_read(path);
    mh::ZeroValidationReport rep = mh::validate(zs);
    if (fmt == "json") {
        out += "{\"schema\": \"mh-validate-v1\", \"cache\": \"" + path +
               "\", \"count\": " + std::to_string(zs.count()) +
               ", \"max_ordinate\": " + g17(zs.max_gamma()) +
               ", \"precision\": " + g17(zs.precision) +
               ", \"rh_verified_height\": " + g17(zs.rh_verified_height) +
               ", \"valid\": " + (rep.ok() ? "true" : "false") +
               ", \"violations\": [";
        for (std::size_t i = 0; i < rep.violations.size(); ++i) {
            if (i) out += ", ";
            out += "\"" + rep.violations[i] + "\"";
        }
        out += "]}\n";
    } else {
        append_set_summary(path, zs, out);
        for (const std::string& v : rep.violations)
            out += "violation: " + v + "\n";
        out += std::string("valid: ") + (rep.ok() ? "yes" : "no") + "\n";
    }
    return rep.ok() ? 0 : 2;
}

// -------------------------------------------------------- scan / refine ----

struct ScanParams {
    std::string cache;
    std::string lo;
    std::string hi;
    std::string step;
    double T = 0.0;
    double threshold = 0.0;
    double cluster = 0.0;
};

int run_scan(const ScanParams& p, const std::string& fmt_flag,
             std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "csv",
                                        {"csv", "json", "text"});
    if (!(p.cluster >= 0.0))
        throw mh::parameter_error("scan: --cluster must be nonnegative");
    const dd lo = parse_flag_dd("--range", p.lo);
    const dd hi = parse_flag_dd("--range", p.hi);
    const dd step = parse_flag_dd("--step", p.step);
    mh::ZeroSet zs = load_cache(p.cache);
    if (step.to_double() > 0.0) {
        const double npts =
            (hi.to_double() - lo.to_double()) / step.to_double() + 1.0;
        std::fprintf(stderr, "scan: T=%.6g threshold=%.6g ~%.4g points\n",
                     p.T, p.threshold, npts);
    }
    std::vector<mh::Candidate> cands =
        mh::scan(zs, p.T, lo, hi, step, p.threshold);
    cands = cluster_candidates(std::move(cands), p.cluster);
    emit_candidates(cands, step, hi.to_double(), p.T, fmt, out);
    std::fprintf(stderr, "scan: %zu candidate%s\n", cands.size(),
                 cands.size() == 1 ? "" : "s");
    return 0;
}

struct RefineParams {
    std::string cache;
    std::string step;
    double y = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double width = 0.0;
};

int run_refine(const RefineParams& p, const std::string& fmt_flag,
               std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "csv",
                                        {"csv", "json", "text"});
    const dd step2 = parse_flag_dd("--step", p.step);
    mh::ZeroSet zs = load_cache(p.cache);
    mh::Candidate cand;
    cand.y = p.y;
    cand.T = p.T1;
    cand.width = p.width;
    mh::Candidate refined = mh::refine(cand, zs, p.T2, step2);
    emit_candidates({refined}, step2, std::abs(refined.y) + 1.0, p.T2, fmt,
                    out);
    return 0;
}

// ------------------------------------------------------------- certify ----

struct CertifyParams {
    std::string cache;
    std::string omega;
    double eps = 0.0;
    double c = 0.0;
    double H = 0.0;
    double a = 0.0;
    double T = 0.0;
    int h = 1;
    bool has_override = false;
    double override_value = 0.0;
};

int run_certify(const CertifyParams& p, const std::string& fmt_flag,
                std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "json", {"json", "text"});
    const dd omega = parse_flag_dd("--omega", p.omega);

    mh::CertificationInput in;
    in.omega = omega.to_double();
    in.eps = p.eps;
    in.c = p.c;
    in.H = p.H;
    in.a = p.a;
    in.h = p.h;
    in.T_sum = p.T;
    in.validated();

    const mh::KernelParams params = mh::KernelParams::validated(p.c, p.eps);
    mh::WeightedZeroSum sum;
    const char* source = "computed";
    if (p.has_override) {
        sum.value = p.override_value;
        sum.T = p.T;
        sum.omega = omega;
        sum.params = params;
        sum.phase_precision = 0.0;
        source = "unverified input";
        std::fprintf(stderr,
                     "certify: zero sum supplied by flag, not computed\n");
    } else {
        if (p.cache.empty())
            throw mh::parameter_error(
                "certify: --zeros is required unless --sum-override is "
                "given");
        mh::ZeroSet zs = load_cache(p.cache);
        sum = mh::kernel_weighted_sum(zs, omega, params, p.T);
    }

    mh::CertificationReport rep = mh::certify(in, sum);
    if (fmt == "json") {
        out += mh::report_to_json(rep, in, source);
        out += "\n";
    } else {
        out += std::string("verdict: ") + mh::verdict_name(rep.verdict) +
               "\n";
        out += "zero_sum: " + g17(rep.zero_sum) + " (" + source + ")\n";
        out += "e1: " + g17(rep.e1) + "\n";
        out += "e2: " + g17(rep.e2) + "\n";
        out += "e3: " + g17(rep.e3) + "\n";
        out += "ace_tail: " + g17(rep.ace_tail) + "\n";
        out += "rm_term: " + g17(rep.rm_term) + "\n";
        out += "total_upper_bound: " + g17(rep.total_upper_bound) + "\n";
        if (rep.verdict == mh::Verdict::kNegativeCertified) {
            mh::SignRegion region = mh::propagate_interval(rep, in);
            out += "x_lo_log: " + mh::dd_to_decimal_string(region.x_lo, 12) +
                   "\n";
            out += "x_hi_log: " + mh::dd_to_decimal_string(region.x_hi, 12) +
                   "\n";
            out += "persistence_log: " + g17(region.persistence_log) + "\n";
            out += "margin: " + g17(region.margin) + "\n";
        }
    }
    return rep.verdict == mh::Verdict::kNegativeCertified ? 0 : 1;
}

// -------------------------------------------------------------- oracle ----

struct OracleParams {
    std::string cache;
    std::vector<double> xs;
    double T = 0.0;
    std::uint64_t sieve_limit = 0;
};

int run_oracle(const OracleParams& p, const std::string& fmt_flag,
               std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "csv",
                                        {"csv", "json", "text"});
    for (double x : p.xs)
        if (!std::isfinite(x) || !(x > 1.0))
            throw mh::domain_error("oracle: x must exceed 1 (got " + g17(x) +
                                   ")");
    if (!(p.T >= 0.0))
        throw mh::parameter_error("oracle: T must be nonnegative");
    const double max_x = *std::max_element(p.xs.begin(), p.xs.end());
    std::uint64_t limit = p.sieve_limit;
    if (limit == 0)
        limit = static_cast<std::uint64_t>(std::ceil(max_x)) + 2;
    if (static_cast<double>(limit) < max_x)
        throw mh::coverage_error("oracle: sieve limit " + u64s(limit) +
                                 " is below the largest x " + g17(max_x));
    if (limit > 1000000000ull)
        throw mh::coverage_error("oracle: x " + g17(max_x) +
                                 " needs a sieve beyond the 1e9 cap");

    mh::ZeroSet zs = load_cache(p.cache);
    if (p.T > zs.max_gamma())
        throw mh::coverage_error("oracle: cutoff T=" + g17(p.T) +
                                 " exceeds the dataset height " +
                                 g17(zs.max_gamma()));
    std::fprintf(stderr, "oracle: sieving primes up to %llu\n",
                 static_cast<unsigned long long>(limit));
    const mh::PrimeTable table = mh::sieve_primes(limit);
    const double c0 = mh::mertens_constant(1e-6).euler_c0;

    struct Row {
        double x, sieve, formula, diff;
    };
    std::vector<Row> rows;
    rows.reserve(p.xs.size());
    for (double x : p.xs) {
        const double lx = std::log(x);
        // Conjugate zero pairs fold to twice the real part, so the sum only
        // walks positive ordinates.
        mh::neumaier acc;
        for (double gamma : zs.gammas) {
            if (gamma > p.T) break;
            acc.add(2.0 * std::real(
                              mh::eit(mh::cplx(-0.5 * lx, -gamma * lx))));
        }
        const double formula = std::log(lx) + c0 - acc.total() +
                               mh::trivial_zero_integral(x).first;
        const double sieve = mh::pi_m_star(x, table);
        rows.push_back({x, sieve, formula, std::abs(sieve - formula)});
    }

    if (fmt == "csv") {
        out += "x,sieve,formula,|diff|\n";
        for (const Row& r : rows)
            out += g17(r.x) + "," + g17(r.sieve) + "," + g17(r.formula) +
                   "," + g17(r.diff) + "\n";
    } else if (fmt == "json") {
        out += "{\"schema\": \"mh-oracle-v1\", \"T\": " + g17(p.T) +
               ", \"sieve_limit\": " + u64s(limit) + ", \"rows\": [";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) out += ", ";
            out += "{\"x\": " + g17(rows[i].x) + ", \"sieve\": " +
                   g17(rows[i].sieve) + ", \"formula\": " +
                   g17(rows[i].formula) + ", \"abs_diff\": " +
                   g17(rows[i].diff) + "}";
        }
        out += "]}\n";
    } else {
        for (const Row& r : rows)
            out += "x=" + g17(r.x) + " sieve=" + g17(r.sieve) +
                   " formula=" + g17(r.formula) + " |diff|=" + g17(r.diff) +
                   "\n";
    }
    return 0;
}

// --------------------------------------------- sieve-check / constants ----

struct SieveCheckParams {
    std::uint64_t limit = 10000000;
    double m_precision = 1e-9;
};

int run_sieve_check(const SieveCheckParams& p, const std::string& fmt_flag,
                    std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "text", {"text", "json"});
    const mh::MertensConstants mc = mh::mertens_constant(p.m_precision);
    mh::neumaier acc;
    std::uint64_t count = 0;
    double min_delta = std::numeric_limits<double>::infinity();
    std::uint64_t argmin = 0;
    std::uint64_t first_violation = 0;
    mh::for_each_prime(p.limit, [&](std::uint64_t prime) {
        acc.add(1.0 / static_cast<double>(prime));
        ++count;
        const double delta = acc.total() -
                             std::log(std::log(static_cast<double>(prime))) -
                             mc.mertens_m;
        if (delta < min_delta) {
            min_delta = delta;
            argmin = prime;
        }
        if (delta <= 0.0 && first_violation == 0) first_violation = prime;
    });

    // The positivity margin is only meaningful when it clears the rigorous
    // uncertainty of the constant itself.
    const char* verdict = "all-positive";
    int code = 0;
    if (first_violation != 0) {
        verdict = "violation";
        code = 1;
    } else if (!(min_delta > mc.tail_bound)) {
        verdict = "inconclusive";
        code = 1;
    }

    if (fmt == "json") {
        out += "{\"schema\": \"mh-sieve-check-v1\", \"limit\": " +
               u64s(p.limit) + ", \"primes\": " + u64s(count) +
               ", \"mertens_m\": " + g17(mc.mertens_m) +
               ", \"m_tail_bound\": " + g17(mc.tail_bound) +
               ", \"min_delta\": " + g17(min_delta) +
               ", \"argmin_prime\": " + u64s(argmin) +
               ", \"first_violation\": " + u64s(first_violation) +
               ", \"verdict\": \"" + verdict + "\"}\n";
    } else {
        out += "limit: " + u64s(p.limit) + "\n";
        out += "primes: " + u64s(count) + "\n";
        out += "mertens_m: " + g17(mc.mertens_m) + "\n";
        out += "m_tail_bound: " + g17(mc.tail_bound) + "\n";
        out += "min_delta: " + g17(min_delta) + "\n";
        out += "argmin_prime: " + u64s(argmin) + "\n";
        if (first_violation != 0)
            out += "first_violation: " + u64s(first_violation) + "\n";
        out += std::string("verdict: ") + verdict + "\n";
    }
    return code;
}

int run_mertens_constant(double precision, const std::string& fmt_flag,
                         std::string& out) {
    const std::string fmt = pick_format(fmt_flag, "text", {"text", "json"});
    const mh::MertensConstants mc = mh::mertens_constant(precision);
    if (fmt == "json") {
        out += "{\"schema\": \"mh-mertens-v1\", \"mertens_m\": " +
               g17(mc.mertens_m) + ", \"euler_c0\": " + g17(mc.euler_c0) +
               ", \"tail_bound\": " + g17(mc.tail_bound) + "}\n";
    } else {
        out += "mertens_m: " + g17(mc.mertens_m) + "\n";
        out += "euler_c0: " + g17(mc.euler_c0) + "\n";
        out += "tail_bound: " + g17(mc.tail_bound) + "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();

    CLI::App app{
        "Locates and certifies regions where the prime-reciprocal deviation "
        "drops below zero"};
    app.require_subcommand(1);
    app.footer(
        "Examples:\n"
        "  mh zeros import --format plain-text zeros.txt --precision 1e-9\n"
        "  mh scan --zeros zeros.mhz1 --range 490 500 --T 1e5\n"
        "  mh certify --omega 495.702833137 --c 280 --eps 2.8e-8 --H 1e11 \\\n"
        "     --a 0.4 --T 4e9 --sum-override -1.00015419");

    unsigned threads = 1;
    std::string out_path;
    std::string format;
    app.add_option("--threads", threads,
                   "worker threads for the summation kernels (default 1)")
        ->check(CLI::Range(1u, 256u));
    app.add_option("--output", out_path,
                   "write the primary output to this file instead of stdout");
    app.add_option("--format", format,
                   "primary output format; default depends on the command")
        ->check(CLI::IsMember({"csv", "json", "text"}));

    auto* zeros_cmd =
        app.add_subcommand("zeros", "zero-ordinate dataset maintenance");
    zeros_cmd->require_subcommand(1);
    zeros_cmd->fallthrough();

    ImportParams imp;
    auto* zi = zeros_cmd->add_subcommand(
        "import", "parse a zero table and write the binary cache");
    zi->fallthrough();
    zi->add_option("path", imp.path, "input text file")->required();
    zi->add_option("--format", imp.format,
                   "plain-text (one ordinate per line) or paired-text "
                   "(index ordinate)")
        ->check(CLI::IsMember({"plain-text", "paired-text"}));
    zi->add_option("--precision", imp.precision,
                   "absolute ordinate accuracy (default: sidecar metadata, "
                   "else 1e-9)");
    zi->add_option("--rh-height", imp.rh_height,
                   "height to which the ordinates are externally verified");
    zi->add_option("--cache", imp.cache,
                   "cache file to write (default: <input stem>.mhz1, "
                   "resolved against MH_CACHE_DIR)");
    zi->add_flag("--force", imp.force, "overwrite an existing cache");

    std::string zv_path;
    auto* zv = zeros_cmd->add_subcommand(
        "validate", "structural checks on a binary cache");
    zv->fallthrough();
    zv->add_option("cache", zv_path, "cache file")->required();

    ScanParams scn;
    std::vector<std::string> scan_range;
    std::string scan_step = "1e-4";
    double scan_T = 0.0;
    double scan_threshold = -0.95;
    double scan_cluster = 0.0;
    bool scan_table1 = false;
    auto* sc = app.add_subcommand(
        "scan", "locate sub-threshold runs of the oscillating zero sum");
    sc->fallthrough();
    sc->add_option("--zeros", scn.cache, "zero-ordinate cache")->required();
    auto* sc_range_opt =
        sc->add_option("--range", scan_range,
                       "scan range LO HI (decimal strings)")
            ->expected(2);
    auto* sc_step_opt = sc->add_option(
        "--step", scan_step, "lattice step, a decimal string (default 1e-4)");
    auto* sc_t_opt = sc->add_option("--T", scan_T, "ordinate cutoff");
    auto* sc_thr_opt = sc->add_option(
        "--threshold", scan_threshold,
        "report runs below this value (default -0.95)");
    auto* sc_cluster_opt = sc->add_option(
        "--cluster", scan_cluster,
        "group candidates closer than this distance and keep each group's "
        "deepest (0 = off)");
    auto* sc_t1 = sc->add_flag(
        "--table1", scan_table1,
        "preset: --range 1 2500 --step 1e-7 --T 1e6 --threshold -0.95 "
        "--cluster 0.01");
    sc_t1->excludes(sc_range_opt)
        ->excludes(sc_step_opt)
        ->excludes(sc_t_opt)
        ->excludes(sc_thr_opt);

    RefineParams ref;
    auto* rf = app.add_subcommand(
        "refine",
        "re-scan a candidate window on a finer lattice with a deeper cutoff");
    rf->fallthrough();
    rf->add_option("--zeros", ref.cache, "zero-ordinate cache")->required();
    rf->add_option("--y", ref.y, "candidate location")->required();
    rf->add_option("--T1", ref.T1, "cutoff the candidate was found with")
        ->required();
    rf->add_option("--T2", ref.T2, "refinement cutoff (must exceed --T1)")
        ->required();
    rf->add_option("--step", ref.step,
                   "refinement lattice step (decimal string)")
        ->required();
    rf->add_option("--width", ref.width, "candidate run width (default 0)");

    CertifyParams cert;
    auto* ct = app.add_subcommand(
        "certify",
        "combine the weighted zero sum with the certified error bounds");
    ct->fallthrough();
    // --h is taken by the hypothesis switch below, so this subcommand keeps
    // only the long help name.
    ct->set_help_flag("--help", "print this help message and exit");
    ct->add_option("--zeros", cert.cache,
                   "zero cache (required unless --sum-override is given)");
    ct->add_option("--omega", cert.omega,
                   "window center on the logarithmic scale (decimal string)")
        ->required();
    ct->add_option("--eps", cert.eps, "window half-width")->required();
    ct->add_option("--c", cert.c, "kernel concentration")->required();
    ct->add_option("--H", cert.H, "height verified on the critical line")
        ->required();
    ct->add_option("--a", cert.a, "summed fraction of the kernel cutoff")
        ->required();
    ct->add_option("--h", cert.h,
                   "0 = assume every zero on the critical line, 1 = no such "
                   "assumption (default 1)");
    ct->add_option("--T", cert.T, "zero-sum cutoff height")->required();
    auto* ct_ov_opt = ct->add_option(
        "--sum-override", cert.override_value,
        "use this zero-sum value instead of summing from a cache; the "
        "report marks it as unverified input");

    OracleParams orc;
    auto* oc = app.add_subcommand(
        "oracle",
        "compare the zero-sum formula for the prime-power reciprocal count "
        "against sieve ground truth");
    oc->fallthrough();
    oc->add_option("--zeros", orc.cache, "zero-ordinate cache")->required();
    oc->add_option("--x", orc.xs, "evaluation points (repeatable)")
        ->required();
    oc->add_option("--T", orc.T, "ordinate cutoff for the formula side")
        ->required();
    oc->add_option("--sieve-limit", orc.sieve_limit,
                   "sieve bound (default: just above the largest x)");

    SieveCheckParams svc;
    auto* sv = app.add_subcommand(
        "sieve-check",
        "verify the deviation stays positive at every prime jump");
    sv->fallthrough();
    sv->add_option("--limit", svc.limit,
                   "check all primes up to this bound (default 1e7)");
    sv->add_option("--m-precision", svc.m_precision,
                   "accuracy goal for the constant (default 1e-9)");

    double mc_precision = 1e-9;
    auto* mc = app.add_subcommand("mertens-constant",
                                  "print the prime-reciprocal limit constant");
    mc->fallthrough();
    mc->add_option("--precision", mc_precision,
                   "rigorous truncation goal (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 5;
    }

    std::string primary;
    int code = 0;
    try {
        mh::set_worker_threads(threads);
        if (zi->parsed()) {
            code = run_zeros_import(imp, format, primary);
        } else if (zv->parsed()) {
            code = run_zeros_validate(zv_path, format, primary);
        } else if (sc->parsed()) {
            if (scan_table1) {
                scn.lo = "1";
                scn.hi = "2500";
                scn.step = "1e-7";
                scn.T = 1e6;
                scn.threshold = -0.95;
                scn.cluster =
                    sc_cluster_opt->count() > 0 ? scan_cluster : 0.01;
            } else {
                if (sc_range_opt->count() == 0)
                    throw mh::parameter_error(
                        "scan: --range LO HI is required (or use --table1)");
                if (sc_t_opt->count() == 0)
                    throw mh::parameter_error(
                        "scan: --T is required (or use --table1)");
                scn.lo = scan_range[0];
                scn.hi = scan_range[1];
                scn.step = scan_step;
                scn.T = scan_T;
                scn.threshold = scan_threshold;
                scn.cluster = scan_cluster;
            }
            code = run_scan(scn, format, primary);
        } else if (rf->parsed()) {
            code = run_refine(ref, format, primary);
        } else if (ct->parsed()) {
            cert.has_override = ct_ov_opt->count() > 0;
            code = run_certify(cert, format, primary);
        } else if (oc->parsed()) {
            code = run_oracle(orc, format, primary);
        } else if (sv->parsed()) {
            code = run_sieve_check(svc, format, primary);
        } else if (mc->parsed()) {
            code = run_mertens_constant(mc_precision, format, primary);
        }
    } catch (const mh::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 70;
    }

    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        f.write(primary.data(),
                static_cast<std::streamsize>(primary.size()));
        f.flush();
        if (!f) {
            std::fprintf(stderr, "error: cannot write output file %s\n",
                         out_path.c_str());
            return 5;
        }
    } else {
        std::fwrite(primary.data(), 1, primary.size(), stdout);
        std::fflush(stdout);
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::fprintf(stderr, "elapsed: %.3f s\n", elapsed);
    return code;
}
