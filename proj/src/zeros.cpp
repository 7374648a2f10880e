#include "mh/zeros.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include "mh/util.hpp"

namespace mh {
namespace {

static_assert(std::endian::native == std::endian::little,
              "cache layout assumes a little-endian host");

constexpr char kMagic[4] = {'M', 'H', 'Z', '1'};
constexpr uint32_t kVersion = 1;
constexpr size_t kHeaderBytes = 4 + 4 + 8 + 8 + 8;
constexpr double kDefaultPrecision = 1e-9;
constexpr double kFirstZeroLo = 14.1347;
constexpr double kFirstZeroHi = 14.1348;
constexpr double kGapCheckFloor = 50.0;
constexpr double kMaxGap = 10.0;
constexpr double kDensityWindow = 50.0;
constexpr double kMinExpectedPerWindow = 4.0;

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_ordinate(std::string_view tok, const std::string& path,
                      size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() ||
        !std::isfinite(v)) {
        throw format_error("zeros: " + path + ": line " +
                           std::to_string(line_no) +
                           ": cannot parse ordinate '" + std::string(tok) +
                           "'");
    }
    if (v <= 0.0) {
        throw format_error("zeros: " + path + ": line " +
                           std::to_string(line_no) + ": non-positive ordinate " +
                           std::to_string(v));
    }
    return v;
}

// "key=value" lines; blank lines and '#' comments are skipped, unknown keys
// ignored.
struct Sidecar {
    std::string source;
    double precision = 0.0;
    uint64_t count = 0;
    bool has_count = false;
};

bool read_sidecar(const std::string& path, Sidecar& out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw format_error("zeros: " + path + ": line " +
                               std::to_string(line_no) +
                               ": expected key=value");
        }
        std::string_view key = trim(sv.substr(0, eq));
        std::string_view val = trim(sv.substr(eq + 1));
        if (key == "source") {
            out.source = std::string(val);
        } else if (key == "precision") {
            double p = 0.0;
            auto [ptr, ec] =
                std::from_chars(val.data(), val.data() + val.size(), p);
            if (ec != std::errc{} || ptr != val.data() + val.size() ||
                !(p > 0.0)) {
                throw format_error("zeros: " + path + ": line " +
                                   std::to_string(line_no) +
                                   ": bad precision '" + std::string(val) +
                                   "'");
            }
            out.precision = p;
        } else if (key == "count") {
            uint64_t c = 0;
            auto [ptr, ec] =
                std::from_chars(val.data(), val.data() + val.size(), c);
            if (ec != std::errc{} || ptr != val.data() + val.size()) {
                throw format_error("zeros: " + path + ": line " +
                                   std::to_string(line_no) + ": bad count '" +
                                   std::string(val) + "'");
            }
            out.count = c;
            out.has_count = true;
        }
        // Unknown keys are tolerated for forward compatibility.
    }
    return true;
}

void store_u32(std::string& buf, uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    buf.append(b, 4);
}

void store_u64(std::string& buf, uint64_t v) {
    char b[8];
    std::memcpy(b, &v, 8);
    buf.append(b, 8);
}

void store_f64(std::string& buf, double v) {
    store_u64(buf, std::bit_cast<uint64_t>(v));
}

uint64_t load_u64(const char* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
    return v;
}

std::string fmt_violation(const char* fmt, ...)
    __attribute__((format(printf, 1, 2)));

std::string fmt_violation(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return std::string(buf);
}

}  // namespace

ZeroSet import_zeros(const std::string& path, ZeroFormat format,
                     double precision, double rh_verified_height) {
    std::ifstream in(path);
    if (!in) throw parameter_error("zeros: cannot open " + path);

    ZeroSet zs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        std::string_view tok = sv;
        if (format == ZeroFormat::kPairedText) {
            size_t sp = sv.find_first_of(" \t");
            if (sp == std::string_view::npos) {
                throw format_error("zeros: " + path + ": line " +
                                   std::to_string(line_no) +
                                   ": expected '<index> <ordinate>'");
            }
            std::string_view idx = sv.substr(0, sp);
            uint64_t iv = 0;
            auto [ptr, ec] =
                std::from_chars(idx.data(), idx.data() + idx.size(), iv);
            if (ec != std::errc{} || ptr != idx.data() + idx.size()) {
                throw format_error("zeros: " + path + ": line " +
                                   std::to_string(line_no) + ": bad index '" +
                                   std::string(idx) + "'");
            }
            tok = trim(sv.substr(sp + 1));
        }
        double v = parse_ordinate(tok, path, line_no);
        if (!zs.gammas.empty() && v <= zs.gammas.back()) {
            throw order_error(fmt_violation(
                "zeros: %s: line %zu: ordinate %.12g is not greater than "
                "preceding %.12g",
                path.c_str(), line_no, v, zs.gammas.back()));
        }
        zs.gammas.push_back(v);
    }
    if (zs.gammas.empty()) {
        throw format_error("zeros: " + path + ": no ordinates found");
    }

    Sidecar meta;
    bool have_meta = read_sidecar(path + ".meta", meta);
    if (have_meta && meta.has_count && meta.count != zs.gammas.size()) {
        throw corruption_error(fmt_violation(
            "zeros: %s: sidecar count %llu does not match %zu parsed "
            "ordinates",
            path.c_str(), (unsigned long long)meta.count, zs.gammas.size()));
    }
    if (precision > 0.0)
        zs.precision = precision;
    else if (have_meta && meta.precision > 0.0)
        zs.precision = meta.precision;
    else
        zs.precision = kDefaultPrecision;
    zs.rh_verified_height = rh_verified_height;
    return zs;
}

ZeroValidationReport validate(const ZeroSet& zs) {
    ZeroValidationReport rep;
    const auto& g = zs.gammas;
    if (g.empty()) {
        rep.violations.push_back("set is empty");
        return rep;
    }
    if (!(zs.precision > 0.0)) {
        rep.violations.push_back("precision is not positive");
    }
    if (!(g.front() > kFirstZeroLo && g.front() < kFirstZeroHi)) {
        rep.violations.push_back(fmt_violation(
            "first ordinate %.9f lies outside (%.4f, %.4f)", g.front(),
            kFirstZeroLo, kFirstZeroHi));
    }
    for (size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0) || !std::isfinite(g[i])) {
            rep.violations.push_back(
                fmt_violation("index %zu: non-positive ordinate %.9g", i,
                              g[i]));
        }
        if (i > 0 && !(g[i] > g[i - 1])) {
            rep.violations.push_back(fmt_violation(
                "index %zu: ordinate %.9f does not ascend past %.9f", i, g[i],
                g[i - 1]));
        }
        if (i > 0 && g[i - 1] >= kGapCheckFloor &&
            g[i] - g[i - 1] > kMaxGap) {
            rep.violations.push_back(fmt_violation(
                "gap %.3f between %.6f and %.6f exceeds %.0f", g[i] - g[i - 1],
                g[i - 1], g[i], kMaxGap));
        }
    }
    // Local density must stay within a factor 2 of log(t/2pi)/(2pi) per unit
    // height, checked on fixed windows above the gap-check floor.
    const double two_pi = 2.0 * M_PI;
    for (double t0 = kGapCheckFloor; t0 + kDensityWindow <= zs.max_gamma();
         t0 += kDensityWindow) {
        double mid = t0 + 0.5 * kDensityWindow;
        double expected = kDensityWindow * std::log(mid / two_pi) / two_pi;
        if (expected < kMinExpectedPerWindow) continue;
        auto lo = std::lower_bound(g.begin(), g.end(), t0);
        auto hi = std::lower_bound(g.begin(), g.end(), t0 + kDensityWindow);
        double observed = static_cast<double>(hi - lo);
        if (observed < 0.5 * expected || observed > 2.0 * expected) {
            rep.violations.push_back(fmt_violation(
                "density %.0f in [%.0f, %.0f) is outside [%.1f, %.1f] "
                "(expected %.1f)",
                observed, t0, t0 + kDensityWindow, 0.5 * expected,
                2.0 * expected, expected));
        }
    }
    return rep;
}

void cache_write(const ZeroSet& zs, const std::string& path) {
    std::string header;
    header.reserve(kHeaderBytes);
    header.append(kMagic, 4);
    store_u32(header, kVersion);
    store_u64(header, zs.gammas.size());
    store_f64(header, zs.precision);
    store_f64(header, zs.rh_verified_height);

    uint64_t crc = crc64_init();
    crc = crc64_update(crc, header.data(), header.size());
    crc = crc64_update(crc, zs.gammas.data(), zs.gammas.size() * 8);
    uint64_t checksum = crc64_final(crc);

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw parameter_error("zeros: cannot write " + tmp);
        out.write(header.data(), static_cast<std::streamsize>(header.size()));
        out.write(reinterpret_cast<const char*>(zs.gammas.data()),
                  static_cast<std::streamsize>(zs.gammas.size() * 8));
        char tb[8];
        std::memcpy(tb, &checksum, 8);
        out.write(tb, 8);
        if (!out) throw parameter_error("zeros: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw parameter_error("zeros: cannot move cache into place at " +
                              path);
    }
}

ZeroSet cache_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parameter_error("zeros: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (data.size() < kHeaderBytes + 8) {
        throw corruption_error("zeros: " + path + ": cache is truncated");
    }
    if (std::memcmp(data.data(), kMagic, 4) != 0) {
        throw format_error("zeros: " + path + ": not a zero cache");
    }
    uint32_t version;
    std::memcpy(&version, data.data() + 4, 4);
    if (version != kVersion) {
        throw format_error("zeros: " + path + ": unsupported cache version " +
                           std::to_string(version));
    }
    uint64_t count = load_u64(data.data() + 8);
    size_t expect = kHeaderBytes + count * 8 + 8;
    if (data.size() != expect) {
        throw corruption_error(fmt_violation(
            "zeros: %s: cache holds %zu bytes, expected %zu for %llu "
            "ordinates",
            path.c_str(), data.size(), expect, (unsigned long long)count));
    }
    uint64_t stored = load_u64(data.data() + data.size() - 8);
    uint64_t actual = crc64(data.data(), data.size() - 8);
    if (stored != actual) {
        throw corruption_error("zeros: " + path + ": checksum mismatch");
    }

    ZeroSet zs;
    zs.precision = std::bit_cast<double>(load_u64(data.data() + 16));
    zs.rh_verified_height = std::bit_cast<double>(load_u64(data.data() + 24));
    zs.gammas.resize(count);
    std::memcpy(zs.gammas.data(), data.data() + kHeaderBytes, count * 8);
    for (size_t i = 0; i < zs.gammas.size(); ++i) {
        if (i ? !(zs.gammas[i] > zs.gammas[i - 1]) : !(zs.gammas[i] > 0.0)) {
            throw order_error(fmt_violation(
                "zeros: %s: cached ordinates not strictly ascending at index "
                "%zu",
                path.c_str(), i));
        }
    }
    return zs;
}

ZeroSet truncated(const ZeroSet& zs, double t_max) {
    ZeroSet out;
    out.precision = zs.precision;
    out.rh_verified_height = zs.rh_verified_height;
    auto end = std::upper_bound(zs.gammas.begin(), zs.gammas.end(), t_max);
    out.gammas.assign(zs.gammas.begin(), end);
    return out;
}

}  // namespace mh
