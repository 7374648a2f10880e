#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mh {

// CRC-64/XZ (reflected, polynomial 0x42F0E1EBA9EA3693, init/xorout all-ones).
// Streaming form: crc = crc64_update(crc64_init(), data, len) ... crc64_final.
uint64_t crc64_init();
uint64_t crc64_update(uint64_t state, const void* data, size_t len);
uint64_t crc64_final(uint64_t state);
uint64_t crc64(const void* data, size_t len);

// Neumaier-compensated accumulator: improved Kahan summation whose result
// depends only on the order of add() calls.
struct neumaier {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double total() const { return sum + comp; }
};

// Runs fn(block) for block = 0..n_blocks-1 on up to n_threads workers.
// Blocks are claimed from a shared counter, so each runs exactly once; any
// reduction the caller performs must be indexed by block (not by thread) to
// stay deterministic.  n_threads <= 1 runs inline.
void parallel_for_blocks(size_t n_blocks, unsigned n_threads,
                         const std::function<void(size_t)>& fn);

// Global worker-thread count used by the summation and scan modules.
// Defaults to 1; the CLI sets it from --threads.
unsigned worker_threads();
void set_worker_threads(unsigned n);

} // namespace mh
