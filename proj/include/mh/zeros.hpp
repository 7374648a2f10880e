#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mh/errors.hpp"

namespace mh {

// Ordered dataset of zeta-zero ordinates (positive imaginary parts only;
// conjugate zeros are applied analytically by the summation code).
struct ZeroSet {
    std::vector<double> gammas;        // strictly ascending, positive
    double precision = 0.0;            // absolute accuracy of each ordinate
    double rh_verified_height = 0.0;   // externally certified height H

    std::size_t count() const { return gammas.size(); }
    double max_gamma() const { return gammas.empty() ? 0.0 : gammas.back(); }
};

enum class ZeroFormat {
    kPlainText,   // one decimal ordinate per line
    kPairedText,  // "<index> <ordinate>" per line
};

// Validation report: empty violation list means the set passed.
struct ZeroValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Parses a zero table from text. Precision is taken from `precision` when
// positive, else from a "<path>.meta" sidecar (key=value lines: source,
// precision, count), else defaults to 1e-9 (public-table granularity).
// Throws format_error (with line number) on unparsable content and
// order_error on non-ascending ordinates.
ZeroSet import_zeros(const std::string& path, ZeroFormat format,
                     double precision = 0.0, double rh_verified_height = 0.0);

// Structural checks: strict ascending order, positivity, first-ordinate
// window (14.1347, 14.1348), no gap > 10 above 50, and local density within
// a factor 2 of log(g/2pi)/2pi. Reports violations instead of throwing.
ZeroValidationReport validate(const ZeroSet& zs);

// Binary cache: magic "MHZ1", version u32, count u64, precision f64,
// rh_verified_height f64, ordinates f64 little-endian, CRC-64 of all
// preceding bytes. Reads validate the checksum (corruption_error) and
// ordering (order_error).
void cache_write(const ZeroSet& zs, const std::string& path);
ZeroSet cache_read(const std::string& path);

// The subset with gammas <= t_max (precision and height metadata carried
// over).
ZeroSet truncated(const ZeroSet& zs, double t_max);

}  // namespace mh
