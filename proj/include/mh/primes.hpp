#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mh/errors.hpp"

namespace mh {

// Ascending table of all primes <= limit.
struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;
};

// Euler's constant, the Mertens constant, and the rigorous bound on the
// truncation error of the series evaluation that produced mertens_m.
struct MertensConstants {
    double euler_c0 = 0.0;
    double mertens_m = 0.0;
    double tail_bound = 0.0;
};

// Boundary handling for sums over primes / prime powers up to x.
enum class SumConvention {
    kClosedFull,  // p <= x, full weight at p == x (sign-sweep convention)
    kOpenHalf,    // p < x, half weight at p == x (normalized convention)
};

// All primes <= limit; requires 2 <= limit <= 1e9. Segments may be sieved in
// parallel; the result is identical for any thread count.
PrimeTable sieve_primes(std::uint64_t limit);

// Binary cache: magic "MHPT", version u32, limit u64, then the primes as
// little-endian u64 until end of file.
void save_prime_table(const std::string& path, const PrimeTable& table);
PrimeTable load_prime_table(const std::string& path);

// Streams the primes <= limit in ascending order without materializing the
// whole table.
void for_each_prime(std::uint64_t limit,
                    const std::function<void(std::uint64_t)>& fn);

// Sum of 1/p over primes up to x under the chosen boundary convention.
// Requires 2 <= x <= table.limit (coverage_error above the sieve limit).
double pi_m(double x, const PrimeTable& table,
            SumConvention conv = SumConvention::kOpenHalf);

// Sum of 1/(m p^m) over prime powers p^m < x (half weight at p^m == x).
double pi_m_star(double x, const PrimeTable& table);

// Sum_{p<=x} 1/p - log log x - M, full weight at x (the sign-sweep
// convention).
double delta_m(double x, const PrimeTable& table,
               const MertensConstants& consts);

// Sum' of log(p) / p^{m r} over prime powers p^m < x, half weight at
// p^m == x.
double chebyshev_psi_r(double x, double r, const PrimeTable& table);

// M = C_0 + sum_p (log(1-1/p) + 1/p) truncated at an adaptively chosen prime
// bound P whose rigorous tail bound is <= precision_goal. precision_goal
// must be >= 1e-12; goals unreachable within the 1e9 sieve cap raise
// precision_error.
MertensConstants mertens_constant(double precision_goal);

// (value, tail_bound) for the sum of 1/(m p^m) over prime powers strictly
// above x with m >= 2, truncated at the table limit; tail_bound covers the
// primes beyond the table. Requires 1 <= x <= table.limit^2.
std::pair<double, double> r_m_exact(double x, const PrimeTable& table);

}  // namespace mh
