#pragma once

#include <stdexcept>
#include <string>

namespace mh {

// Base class for all library failures. Subclasses partition into the exit
// code buckets used by the CLI:
//   2 - malformed input data   (format_error, order_error, corruption_error)
//   3 - refusing to overwrite  (safety_error)
//   4 - dataset too small      (coverage_error)
//   5 - violated precondition  (parameter_error, domain_error, range_error,
//                               precision_error, accuracy_error,
//                               consistency_error, verdict_error)
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A line of input text could not be parsed.
struct format_error : error {
    using error::error;
};

// Input ordinates were not strictly ascending.
struct order_error : error {
    using error::error;
};

// A binary cache failed its checksum or is truncated.
struct corruption_error : error {
    using error::error;
};

// Writing would clobber an existing file without --force.
struct safety_error : error {
    using error::error;
};

// The request needs data beyond what the loaded set or table provides.
struct coverage_error : error {
    using error::error;
};

// An argument violates a documented hypothesis (e.g. eps >= 1e-3).
struct parameter_error : error {
    using error::error;
};

// An argument lies outside the mathematical domain of the function.
struct domain_error : error {
    using error::error;
};

// The requested value is not representable in the working type.
struct range_error : error {
    using error::error;
};

// The requested accuracy goal cannot be met with configured limits.
struct precision_error : error {
    using error::error;
};

// An adaptive scheme failed to converge to its accuracy contract.
struct accuracy_error : error {
    using error::error;
};

// Two inputs that must describe the same run disagree.
struct consistency_error : error {
    using error::error;
};

// An operation requiring a certified-negative report received an
// inconclusive one.
struct verdict_error : error {
    using error::error;
};

} // namespace mh
