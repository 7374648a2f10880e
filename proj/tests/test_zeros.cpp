#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mh/zeros.hpp"
#include "zeros_ref.hpp"

using namespace mh;

namespace {

std::string tmp_path(const char* name) {
    const char* dir = std::getenv("MH_TEST_TMP");
    std::string base = dir ? dir : "/tmp";
    return base + "/" + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    REQUIRE(out.good());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

template <class E, class F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return "<no exception>";
}

bool contains(const std::string& hay, const char* needle) {
    return hay.find(needle) != std::string::npos;
}

ZeroSet reference_set() {
    ZeroSet zs;
    zs.gammas = zeros_below_100();
    zs.precision = 1e-9;
    zs.rh_verified_height = 1e11;
    return zs;
}

}  // namespace

TEST_CASE("plain-text import parses one ordinate per line") {
    const std::string path = tmp_path("zeros_plain.txt");
    write_file(path,
               "14.134725142\r\n"
               "21.022039639\n"
               "\n"
               "25.010857580\n");
    ZeroSet zs = import_zeros(path, ZeroFormat::kPlainText);
    REQUIRE(zs.count() == 3);
    CHECK(zs.gammas[0] == 14.134725142);
    CHECK(zs.gammas[1] == 21.022039639);
    CHECK(zs.gammas[2] == 25.010857580);
    CHECK(zs.max_gamma() == 25.010857580);
    CHECK(zs.precision == 1e-9);  // default when no sidecar and no override
    CHECK(zs.rh_verified_height == 0.0);

    ZeroSet zp = import_zeros(path, ZeroFormat::kPlainText, 1e-10, 3e12);
    CHECK(zp.precision == 1e-10);
    CHECK(zp.rh_verified_height == 3e12);
}

TEST_CASE("paired-text import reads index-ordinate rows") {
    const std::string path = tmp_path("zeros_paired.txt");
    write_file(path,
               "1 14.134725142\n"
               "2\t21.022039639\n"
               "3   25.010857580\n");
    ZeroSet zs = import_zeros(path, ZeroFormat::kPairedText);
    REQUIRE(zs.count() == 3);
    CHECK(zs.gammas[0] == 14.134725142);
    CHECK(zs.gammas[1] == 21.022039639);
    CHECK(zs.gammas[2] == 25.010857580);

    write_file(path, "x1 14.134725142\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPairedText),
                    format_error);
    write_file(path, "14.134725142\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPairedText),
                    format_error);
}

TEST_CASE("sidecar metadata supplies precision and cross-checks count") {
    const std::string path = tmp_path("zeros_meta.txt");
    const std::string meta = path + ".meta";
    write_file(path, "14.134725142\n21.022039639\n25.010857580\n");
    write_file(meta,
               "# provenance\n"
               "source = public zero table\n"
               "precision = 1e-10\n"
               "count = 3\n"
               "future_key = ignored\n");
    ZeroSet zs = import_zeros(path, ZeroFormat::kPlainText);
    CHECK(zs.precision == 1e-10);

    // An explicit precision argument wins over the sidecar.
    ZeroSet zo = import_zeros(path, ZeroFormat::kPlainText, 5e-11);
    CHECK(zo.precision == 5e-11);

    write_file(meta, "count=4\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText),
                    corruption_error);

    write_file(meta, "precision=zero\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    write_file(meta, "no equals sign\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    std::remove(meta.c_str());
    CHECK(import_zeros(path, ZeroFormat::kPlainText).precision == 1e-9);
}

TEST_CASE("import rejects malformed input with line numbers") {
    const std::string path = tmp_path("zeros_bad.txt");

    write_file(path, "");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);
    write_file(path, "\n\n\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    write_file(path, "14.134725142\nnot-a-number\n");
    std::string msg = message_of<format_error>(
        [&] { import_zeros(path, ZeroFormat::kPlainText); });
    CHECK(contains(msg, "line 2"));
    CHECK(contains(msg, "not-a-number"));

    write_file(path, "14.134725142 trailing\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    write_file(path, "inf\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    write_file(path, "-3.5\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), format_error);

    write_file(path, "14.134725142\n21.022039639\n20.0\n");
    msg = message_of<order_error>(
        [&] { import_zeros(path, ZeroFormat::kPlainText); });
    CHECK(contains(msg, "line 3"));
    CHECK(contains(msg, "20"));

    write_file(path, "14.134725142\n14.134725142\n");
    CHECK_THROWS_AS(import_zeros(path, ZeroFormat::kPlainText), order_error);

    CHECK_THROWS_AS(
        import_zeros(tmp_path("zeros_missing.txt"), ZeroFormat::kPlainText),
        parameter_error);
}

TEST_CASE("validate reports violations instead of throwing") {
    ZeroSet good = reference_set();
    ZeroValidationReport rep = validate(good);
    CHECK(rep.ok());
    CHECK(rep.violations.empty());

    ZeroSet empty;
    empty.precision = 1e-9;
    rep = validate(empty);
    REQUIRE(!rep.ok());
    CHECK(contains(rep.violations.front(), "empty"));

    ZeroSet offset = good;
    offset.gammas.erase(offset.gammas.begin());  // now starts at 21.02
    rep = validate(offset);
    REQUIRE(!rep.ok());
    CHECK(contains(rep.violations.front(), "first ordinate"));

    ZeroSet unsorted = good;
    std::swap(unsorted.gammas[3], unsorted.gammas[4]);
    rep = validate(unsorted);
    REQUIRE(!rep.ok());
    bool saw_order = false;
    for (const auto& v : rep.violations) saw_order |= contains(v, "ascend");
    CHECK(saw_order);

    ZeroSet no_prec = good;
    no_prec.precision = 0.0;
    rep = validate(no_prec);
    REQUIRE(!rep.ok());
    CHECK(contains(rep.violations.front(), "precision"));

    ZeroSet gappy;
    gappy.precision = 1e-9;
    gappy.gammas = {14.13474, 20.0, 30.0, 40.0, 50.0, 51.0, 70.0};
    rep = validate(gappy);
    REQUIRE(!rep.ok());
    bool saw_gap = false;
    for (const auto& v : rep.violations) saw_gap |= contains(v, "gap");
    CHECK(saw_gap);

    // A wide spacing below the check floor is tolerated.
    ZeroSet low;
    low.precision = 1e-9;
    low.gammas = {14.13474, 45.0};
    CHECK(validate(low).ok());

    // Ordinates spaced 2.6x too thin at height 10^4 break the density rule.
    ZeroSet thin;
    thin.precision = 1e-9;
    thin.gammas.push_back(14.134725141734695);
    for (int k = 0; k < 200; ++k) thin.gammas.push_back(1e4 + 2.2 * k);
    rep = validate(thin);
    REQUIRE(!rep.ok());
    bool saw_density = false;
    for (const auto& v : rep.violations)
        saw_density |= contains(v, "density");
    CHECK(saw_density);
}

TEST_CASE("cache round-trip is bitwise lossless") {
    const std::string path = tmp_path("zeros_rt.mhz1");
    ZeroSet zs = reference_set();
    cache_write(zs, path);
    ZeroSet rt = cache_read(path);
    REQUIRE(rt.count() == zs.count());
    CHECK(std::memcmp(rt.gammas.data(), zs.gammas.data(),
                      zs.count() * sizeof(double)) == 0);
    CHECK(rt.precision == zs.precision);
    CHECK(rt.rh_verified_height == zs.rh_verified_height);

    // Rewriting in place is allowed at this layer (the CLI owns --force).
    zs.rh_verified_height = 2e11;
    cache_write(zs, path);
    CHECK(cache_read(path).rh_verified_height == 2e11);
}

TEST_CASE("cache read rejects tampered bytes") {
    const std::string path = tmp_path("zeros_tamper.mhz1");
    const std::string victim = tmp_path("zeros_victim.mhz1");
    cache_write(reference_set(), path);
    const std::string original = read_file(path);

    std::string flipped = original;
    flipped[40] = static_cast<char>(flipped[40] ^ 0x01);  // payload byte
    write_file(victim, flipped);
    CHECK_THROWS_AS(cache_read(victim), corruption_error);

    write_file(victim, original.substr(0, original.size() - 9));
    CHECK_THROWS_AS(cache_read(victim), corruption_error);

    std::string magic = original;
    magic[0] = 'X';
    write_file(victim, magic);
    CHECK_THROWS_AS(cache_read(victim), format_error);

    std::string version = original;
    version[4] = 9;
    write_file(victim, version);
    CHECK_THROWS_AS(cache_read(victim), format_error);

    std::string count = original;
    count[8] = static_cast<char>(count[8] ^ 0x01);
    write_file(victim, count);
    CHECK_THROWS_AS(cache_read(victim), corruption_error);

    write_file(victim, "MH");
    CHECK_THROWS_AS(cache_read(victim), corruption_error);

    CHECK_THROWS_AS(cache_read(tmp_path("zeros_nonexistent.mhz1")),
                    parameter_error);
}

TEST_CASE("truncation composes and keeps metadata") {
    const ZeroSet zs = reference_set();
    ZeroSet t60 = truncated(zs, 60.0);
    CHECK(t60.count() == 13);  // ordinates 14.13 .. 59.35
    CHECK(t60.max_gamma() == 59.34704400260235);
    CHECK(t60.precision == zs.precision);
    CHECK(t60.rh_verified_height == zs.rh_verified_height);

    // The boundary is inclusive.
    ZeroSet exact = truncated(zs, zs.gammas[11]);
    CHECK(exact.count() == 12);

    ZeroSet nested = truncated(truncated(zs, 80.0), 60.0);
    CHECK(nested.gammas == t60.gammas);

    CHECK(truncated(zs, 1e9).gammas == zs.gammas);
    CHECK(truncated(zs, 5.0).count() == 0);
}

TEST_CASE("large cache round-trip stays under a second") {
    const std::string path = tmp_path("zeros_large.mhz1");
    ZeroSet zs;
    zs.precision = 1e-9;
    zs.rh_verified_height = 1e11;
    const std::size_t n = 1750000;
    zs.gammas.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        zs.gammas[i] = 14.134725 + 0.63 * static_cast<double>(i);

    auto t0 = std::chrono::steady_clock::now();
    cache_write(zs, path);
    ZeroSet rt = cache_read(path);
    auto t1 = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(t1 - t0).count();

    REQUIRE(rt.count() == n);
    CHECK(std::memcmp(rt.gammas.data(), zs.gammas.data(),
                      n * sizeof(double)) == 0);
    CHECK(seconds < 1.0);
    std::remove(path.c_str());
}
