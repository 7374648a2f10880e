#include "mh/util.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <thread>

namespace mh {

namespace {

std::array<uint64_t, 256> make_crc64_table() {
    // Reflected form of polynomial 0x42F0E1EBA9EA3693.
    const uint64_t poly = 0xC96C5795D7870F42ULL;
    std::array<uint64_t, 256> table{};
    for (uint32_t i = 0; i < 256; ++i) {
        uint64_t crc = i;
        for (int b = 0; b < 8; ++b)
            crc = (crc >> 1) ^ ((crc & 1) ? poly : 0);
        table[i] = crc;
    }
    return table;
}

const std::array<uint64_t, 256>& crc64_table() {
    static const std::array<uint64_t, 256> table = make_crc64_table();
    return table;
}

} // namespace

uint64_t crc64_init() { return ~0ULL; }

uint64_t crc64_update(uint64_t state, const void* data, size_t len) {
    const auto& table = crc64_table();
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i)
        state = (state >> 8) ^ table[(state ^ p[i]) & 0xFF];
    return state;
}

uint64_t crc64_final(uint64_t state) { return ~state; }

uint64_t crc64(const void* data, size_t len) {
    return crc64_final(crc64_update(crc64_init(), data, len));
}

void parallel_for_blocks(size_t n_blocks, unsigned n_threads,
                         const std::function<void(size_t)>& fn) {
    if (n_blocks == 0) return;
    if (n_threads <= 1 || n_blocks == 1) {
        for (size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    unsigned workers = n_threads;
    if (workers > n_blocks) workers = static_cast<unsigned>(n_blocks);
    std::atomic<size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    auto run = [&] {
        for (;;) {
            size_t b = next.fetch_add(1);
            if (b >= n_blocks || failed.load()) return;
            try {
                fn(b);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

namespace {
std::atomic<unsigned> g_worker_threads{1};
}

unsigned worker_threads() { return g_worker_threads.load(); }

void set_worker_threads(unsigned n) { g_worker_threads.store(n == 0 ? 1 : n); }

} // namespace mh
