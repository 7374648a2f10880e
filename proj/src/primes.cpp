#include "mh/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "mh/util.hpp"

namespace mh {

namespace {

constexpr std::uint64_t kSieveCap = 1000000000ULL;
constexpr long double kEulerC0L = 0.5772156649015328606065120900824024L;

std::vector<std::uint32_t> base_primes_upto(std::uint32_t n) {
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= n;
             j += i)
            comp[j] = true;
    }
    return out;
}

// Appends the primes among the odd numbers of [lo, hi) to out.
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::uint32_t>& base,
                   std::vector<std::uint64_t>& out) {
    if (lo < 3) lo = 3;
    if (lo % 2 == 0) ++lo;
    if (lo >= hi) return;
    const std::uint64_t n_odd = (hi - lo + 1) / 2;
    std::vector<bool> comp(n_odd, false);
    for (std::uint32_t p : base) {
        if (p == 2) continue;
        const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp >= hi) break;
        std::uint64_t q = ((lo + p - 1) / p) * p;
        if (q < pp) q = pp;
        if (q % 2 == 0) q += p;
        for (; q < hi; q += 2ULL * p) comp[(q - lo) / 2] = true;
    }
    for (std::uint64_t i = 0; i < n_odd; ++i)
        if (!comp[i]) out.push_back(lo + 2 * i);
}

void check_sieve_limit(std::uint64_t limit) {
    if (limit < 2 || limit > kSieveCap)
        throw parameter_error("sieve limit must be in [2, 1e9]");
}

// Sum_{m>=2} 1/(m p^m): the per-prime summand of C_0 - M.
long double prime_power_tail(std::uint64_t p) {
    const long double u = 1.0L / static_cast<long double>(p);
    if (p <= 1000) return -std::log1p(-u) - u;
    // series u^2/2 + u^3/3 + ... ; u <= 1e-3 so a handful of terms suffice
    long double pw = u * u;
    long double s = 0.5L * pw;
    for (int m = 3; m <= 12; ++m) {
        pw *= u;
        const long double term = pw / m;
        s += term;
        if (term < 1e-30L * s) break;
    }
    return s;
}

// Rigorous bound on sum_{p>P} sum_{m>=2} 1/(m p^m): the minimum of the
// integer majorization 1/(2(P-1)) and the partial-summation bound
// 1.25506/((P-1) log P).
double prime_tail_bound(double P) {
    return std::min(0.5 / (P - 1.0),
                    1.25506 / ((P - 1.0) * std::log(P)));
}

void write_u32(std::ofstream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}
void write_u64(std::ofstream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}

}  // namespace

PrimeTable sieve_primes(std::uint64_t limit) {
    check_sieve_limit(limit);
    PrimeTable t;
    t.limit = limit;
    t.primes.push_back(2);
    if (limit < 3) return t;
    const auto root = static_cast<std::uint32_t>(
        std::sqrt(static_cast<double>(limit)));
    const auto base = base_primes_upto(root + 2);
    constexpr std::uint64_t kSpan = 1ULL << 22;
    const std::size_t n_seg =
        static_cast<std::size_t>((limit - 2) / kSpan) + 1;
    std::vector<std::vector<std::uint64_t>> parts(n_seg);
    parallel_for_blocks(n_seg, worker_threads(), [&](std::size_t s) {
        const std::uint64_t lo = 3 + s * kSpan;
        const std::uint64_t hi = std::min(lo + kSpan, limit + 1);
        if (lo < hi) sieve_segment(lo, hi, base, parts[s]);
    });
    std::size_t total = t.primes.size();
    for (const auto& v : parts) total += v.size();
    t.primes.reserve(total);
    for (const auto& v : parts)
        t.primes.insert(t.primes.end(), v.begin(), v.end());
    return t;
}

void for_each_prime(std::uint64_t limit,
                    const std::function<void(std::uint64_t)>& fn) {
    check_sieve_limit(limit);
    fn(2);
    if (limit < 3) return;
    const auto root = static_cast<std::uint32_t>(
        std::sqrt(static_cast<double>(limit)));
    const auto base = base_primes_upto(root + 2);
    constexpr std::uint64_t kSpan = 1ULL << 22;
    std::vector<std::uint64_t> buf;
    for (std::uint64_t lo = 3; lo <= limit; lo += kSpan) {
        const std::uint64_t hi = std::min(lo + kSpan, limit + 1);
        buf.clear();
        sieve_segment(lo, hi, base, buf);
        for (std::uint64_t p : buf) fn(p);
    }
}

void save_prime_table(const std::string& path, const PrimeTable& table) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw parameter_error("cannot open file for writing: " + path);
    os.write("MHPT", 4);
    write_u32(os, 1);
    write_u64(os, table.limit);
    for (std::uint64_t p : table.primes) write_u64(os, p);
    os.flush();
    if (!os) throw mh::error("write failed: " + path);
}

PrimeTable load_prime_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw parameter_error("cannot open file: " + path);
    const std::int64_t size = is.tellg();
    is.seekg(0);
    if (size < 16) throw format_error("prime table too short: " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "MHPT", 4) != 0)
        throw format_error("bad magic in prime table: " + path);
    std::uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1)
        throw format_error("unsupported prime table version " +
                           std::to_string(version));
    PrimeTable t;
    is.read(reinterpret_cast<char*>(&t.limit), 8);
    const std::int64_t payload = size - 16;
    if (payload % 8 != 0)
        throw corruption_error("truncated prime table payload: " + path);
    const std::size_t count = static_cast<std::size_t>(payload / 8);
    t.primes.resize(count);
    if (count > 0)
        is.read(reinterpret_cast<char*>(t.primes.data()),
                static_cast<std::streamsize>(payload));
    if (!is) throw corruption_error("short read on prime table: " + path);
    if (count == 0 || t.primes.front() != 2)
        throw corruption_error("prime table must start at 2: " + path);
    for (std::size_t i = 1; i < count; ++i)
        if (t.primes[i] <= t.primes[i - 1])
            throw order_error("prime table entries not ascending: " + path);
    if (t.primes.back() > t.limit)
        throw corruption_error("prime exceeds declared limit: " + path);
    return t;
}

double pi_m(double x, const PrimeTable& table, SumConvention conv) {
    if (!(x >= 2.0) || !std::isfinite(x))
        throw domain_error("pi_m: requires 2 <= x");
    if (x > static_cast<double>(table.limit))
        throw coverage_error("pi_m: x exceeds the sieve limit");
    neumaier acc;
    for (std::uint64_t p : table.primes) {
        const double dp = static_cast<double>(p);
        if (dp > x) break;
        if (dp < x)
            acc.add(1.0 / dp);
        else
            acc.add(conv == SumConvention::kOpenHalf ? 0.5 / dp : 1.0 / dp);
    }
    return acc.total();
}

double pi_m_star(double x, const PrimeTable& table) {
    if (!(x >= 2.0) || !std::isfinite(x))
        throw domain_error("pi_m_star: requires 2 <= x");
    if (x > static_cast<double>(table.limit))
        throw coverage_error("pi_m_star: x exceeds the sieve limit");
    neumaier acc;
    for (std::uint64_t p : table.primes) {
        if (static_cast<double>(p) > x) break;
        // pm stays <= x <= 1e9, so pm * p cannot overflow 64 bits.
        std::uint64_t pm = p;
        for (int m = 1;; ++m, pm *= p) {
            const double dpm = static_cast<double>(pm);
            if (dpm > x) break;
            acc.add((dpm < x ? 1.0 : 0.5) / (m * dpm));
        }
    }
    return acc.total();
}

double delta_m(double x, const PrimeTable& table,
               const MertensConstants& consts) {
    if (!(x >= 2.0) || !std::isfinite(x))
        throw domain_error("delta_m: requires x >= 2");
    const double s = pi_m(x, table, SumConvention::kClosedFull);
    return s - std::log(std::log(x)) - consts.mertens_m;
}

double chebyshev_psi_r(double x, double r, const PrimeTable& table) {
    if (!(x >= 2.0) || !std::isfinite(x) || !std::isfinite(r))
        throw domain_error("chebyshev_psi_r: requires finite r and x >= 2");
    if (x > static_cast<double>(table.limit))
        throw coverage_error("chebyshev_psi_r: x exceeds the sieve limit");
    neumaier acc;
    for (std::uint64_t p : table.primes) {
        if (static_cast<double>(p) > x) break;
        const double lg = std::log(static_cast<double>(p));
        std::uint64_t pm = p;
        for (int m = 1;; ++m, pm *= p) {
            const double dpm = static_cast<double>(pm);
            if (dpm > x) break;
            const double w = lg * std::pow(dpm, -r);
            acc.add(dpm < x ? w : 0.5 * w);
        }
    }
    return acc.total();
}

MertensConstants mertens_constant(double precision_goal) {
    if (!(precision_goal >= 1e-12) || !std::isfinite(precision_goal))
        throw parameter_error(
            "mertens_constant: precision goal must be >= 1e-12");
    if (prime_tail_bound(static_cast<double>(kSieveCap)) > precision_goal)
        throw precision_error(
            "mertens_constant: precision goal unreachable within the 1e9 "
            "sieve cap");
    // Smallest P with tail bound <= goal, by bisection on the bound formula.
    double lo = 10.0, hi = static_cast<double>(kSieveCap);
    while (hi / lo > 1.0009765625) {
        const double mid = std::sqrt(lo * hi);
        if (prime_tail_bound(mid) <= precision_goal)
            hi = mid;
        else
            lo = mid;
    }
    const auto P = static_cast<std::uint64_t>(std::ceil(hi));

    neumaier acc;
    for_each_prime(P, [&acc](std::uint64_t p) {
        acc.add(static_cast<double>(prime_power_tail(p)));
    });
    MertensConstants out;
    out.euler_c0 = static_cast<double>(kEulerC0L);
    out.mertens_m =
        static_cast<double>(kEulerC0L - static_cast<long double>(acc.total()));
    out.tail_bound = prime_tail_bound(static_cast<double>(P));
    if (std::fabs(out.mertens_m - 0.26149) >= 1e-5 ||
        !(out.mertens_m < out.euler_c0))
        throw consistency_error(
            "mertens_constant: result violates its own invariants");
    return out;
}

std::pair<double, double> r_m_exact(double x, const PrimeTable& table) {
    if (!(x >= 1.0) || !std::isfinite(x))
        throw domain_error("r_m_exact: requires x >= 1");
    const double lim = static_cast<double>(table.limit);
    if (x > lim * lim)
        throw coverage_error(
            "r_m_exact: x exceeds the squared sieve limit");
    const auto xl = static_cast<long double>(x);
    neumaier acc;
    for (std::uint64_t p : table.primes) {
        const long double pl = static_cast<long double>(p);
        long double contrib = prime_power_tail(p);
        if (pl * pl <= xl) {
            // remove the powers p^m <= x (strict: p^m == x is excluded from
            // the result, i.e. stays removed)
            long double pm = pl * pl;
            for (int m = 2; pm <= xl; ++m, pm *= pl)
                contrib -= 1.0L / (m * pm);
        }
        acc.add(static_cast<double>(contrib));
    }
    return {acc.total(), prime_tail_bound(lim)};
}

}  // namespace mh
