// End-to-end tests for the command-line driver.  Each case launches the
// real binary (path in MH_BIN) as a subprocess and checks exit code, the
// primary output bytes, and stderr diagnostics.  Where the output is a
// computation, the expected bytes are produced by calling the library
// directly, so the CLI is pinned to the library rather than to frozen
// strings.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "mh/bounds.hpp"
#include "mh/dd.hpp"
#include "mh/primes.hpp"
#include "mh/search.hpp"
#include "mh/zeros.hpp"
#include "mh/zerosum.hpp"
#include "zeros_ref.hpp"

namespace {

using nlohmann::json;

const char* mh_bin() {
    const char* bin = std::getenv("MH_BIN");
    REQUIRE_MESSAGE(bin != nullptr,
                    "MH_BIN must point at the command-line binary");
    return bin;
}

std::string cli_tmp(const char* name) {
    const char* dir = std::getenv("MH_TEST_TMP");
    std::string base = dir ? dir : "/tmp";
    return base + "/cli_" + name;
}

void put_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    REQUIRE(out.good());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

bool has(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs `mh <args>` with stdout/stderr captured to files.  `env_prefix` is
// prepended verbatim (e.g. "MH_CACHE_DIR=/x "), relying on /bin/sh
// semantics.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = cli_tmp("stdout.txt");
    const std::string err_path = cli_tmp("stderr.txt");
    const std::string cmd = env_prefix + std::string(mh_bin()) + " " + args +
                            " >" + out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    RunResult res;
    res.code = WEXITSTATUS(rc);
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

std::string ref_zero_lines() {
    std::string text;
    for (double g : zeros_below_100()) text += g17(g) + "\n";
    return text;
}

// Writes a cache of the 29 reference ordinates directly through the
// library, bypassing the import command, so cases that only consume a
// cache do not depend on the import cases.
std::string ref_cache_path() {
    const std::string path = cli_tmp("ref.mhz1");
    mh::ZeroSet zs;
    zs.gammas = zeros_below_100();
    zs.precision = 1e-9;
    zs.rh_verified_height = 1e11;
    mh::cache_write(zs, path);
    return path;
}

}  // namespace

TEST_CASE("cli import writes a cache and prints its summary") {
    const std::string txt = cli_tmp("z29.txt");
    const std::string cache = cli_tmp("z29.mhz1");
    put_file(txt, ref_zero_lines());
    std::remove(cache.c_str());

    RunResult r = run("zeros import " + txt +
                      " --rh-height 1e11 --cache " + cache);
    CHECK(r.code == 0);
    CHECK(has(r.out, "cache: " + cache));
    CHECK(has(r.out, "count: 29"));
    CHECK(has(r.out, "max_ordinate: " + g17(zeros_below_100().back())));
    CHECK(has(r.out, "precision: " + g17(1e-9)));
    CHECK(has(r.out, "rh_verified_height: " + g17(1e11)));

    // Parsing 17-digit decimals reproduces the doubles exactly.
    mh::ZeroSet zs = mh::cache_read(cache);
    CHECK(zs.gammas == zeros_below_100());
    CHECK(zs.precision == 1e-9);
    CHECK(zs.rh_verified_height == 1e11);
}

TEST_CASE("cli import refuses to overwrite a cache without --force") {
    const std::string txt = cli_tmp("z29b.txt");
    const std::string cache = cli_tmp("z29b.mhz1");
    put_file(txt, ref_zero_lines());
    std::remove(cache.c_str());
    CHECK(run("zeros import " + txt + " --cache " + cache).code == 0);

    RunResult again = run("zeros import " + txt + " --cache " + cache);
    CHECK(again.code == 3);
    CHECK(has(again.err, "already exists"));
    CHECK(again.out.empty());

    CHECK(run("zeros import " + txt + " --cache " + cache + " --force")
              .code == 0);
}

TEST_CASE("cli import rejects malformed input with the offending line") {
    const std::string txt = cli_tmp("zbad.txt");
    put_file(txt, "14.134725141734695\nnot-a-number\n");
    RunResult r = run("zeros import " + txt + " --cache " +
                      cli_tmp("zbad.mhz1") + " --force");
    CHECK(r.code == 2);
    CHECK(has(r.err, "line 2"));
}

TEST_CASE("cli import reads the paired format and sidecar metadata") {
    const std::string txt = cli_tmp("zpaired.txt");
    std::string body;
    int idx = 0;
    for (double g : zeros_below_100())
        body += std::to_string(++idx) + " " + g17(g) + "\n";
    put_file(txt, body);
    put_file(txt + ".meta", "# provenance\nprecision = 2.5e-8\ncount = 29\n");

    const std::string cache = cli_tmp("zpaired.mhz1");
    RunResult r = run("zeros import " + txt +
                      " --format paired-text --cache " + cache + " --force");
    CHECK(r.code == 0);
    CHECK(has(r.out, "precision: " + g17(2.5e-8)));
    mh::ZeroSet zs = mh::cache_read(cache);
    CHECK(zs.gammas == zeros_below_100());
    CHECK(zs.precision == 2.5e-8);

    // An explicit flag beats the sidecar value.
    RunResult r2 = run("zeros import " + txt +
                       " --format paired-text --precision 1e-7 --cache " +
                       cache + " --force");
    CHECK(r2.code == 0);
    CHECK(has(r2.out, "precision: " + g17(1e-7)));
}

TEST_CASE("cli validate reports structure and detects tampering") {
    const std::string cache = ref_cache_path();
    RunResult ok = run("zeros validate " + cache);
    CHECK(ok.code == 0);
    CHECK(has(ok.out, "valid: yes"));

    RunResult js = run("zeros validate " + cache + " --format json");
    CHECK(js.code == 0);
    json j = json::parse(js.out);
    CHECK(j.at("schema") == "mh-validate-v1");
    CHECK(j.at("count") == 29);
    CHECK(j.at("valid") == true);
    CHECK(j.at("violations").empty());

    std::string bytes = slurp(cache);
    bytes[bytes.size() / 2] ^= 0x20;
    const std::string bad = cli_tmp("tampered.mhz1");
    put_file(bad, bytes);
    RunResult tam = run("zeros validate " + bad);
    CHECK(tam.code == 2);
    CHECK(has(tam.err, "checksum"));

    CHECK(run("zeros validate " + cli_tmp("absent.mhz1")).code == 5);
}

TEST_CASE("cli scan reproduces the library scan byte for byte") {
    const std::string cache = ref_cache_path();
    const std::string args =
        "scan --zeros " + cache + " --range 1 50 --step 1e-2 --T 90 "
        "--threshold -0.4";

    mh::ZeroSet zs = mh::cache_read(cache);
    const mh::dd step = mh::parse_decimal_dd("1e-2");
    std::vector<mh::Candidate> cands =
        mh::scan(zs, 90.0, mh::parse_decimal_dd("1"),
                 mh::parse_decimal_dd("50"), step, -0.4);
    REQUIRE(cands.size() == 23);
    const std::string expected = mh::candidates_csv(cands, step, 2);

    RunResult r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out == expected);

    // Reruns are byte-identical, and --output routes the same bytes to a
    // file leaving stdout empty.
    CHECK(run(args).out == expected);
    const std::string out_file = cli_tmp("scan.csv");
    RunResult f = run(args + " --output " + out_file);
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    CHECK(slurp(out_file) == expected);
}

TEST_CASE("cli scan emits json and text renderings of the same candidates") {
    const std::string cache = ref_cache_path();
    const std::string base =
        "scan --zeros " + cache + " --range 1 50 --step 1e-2 --T 50 "
        "--threshold -0.5";

    RunResult csv = run(base);
    CHECK(csv.code == 0);
    CHECK(csv.out == "y,sigma,T,width\n17.42," + g17(-0.52123654950566367) +
                         ",50,0.01\n");

    RunResult js = run(base + " --format json");
    CHECK(js.code == 0);
    json j = json::parse(js.out);
    CHECK(j.at("schema") == "mh-candidates-v1");
    CHECK(j.at("count") == 1);
    CHECK(j.at("candidates")[0].at("y") == 17.42);
    CHECK(j.at("candidates")[0].at("index") == 1742);

    RunResult tx = run(base + " --format text");
    CHECK(tx.code == 0);
    CHECK(has(tx.out, "candidate: y=17.42"));
    CHECK(has(tx.out, "candidates: 1"));
}

TEST_CASE("cli scan groups nearby candidates under --cluster") {
    const std::string cache = ref_cache_path();
    const std::string base =
        "scan --zeros " + cache + " --range 1 50 --step 1e-2 --T 90 "
        "--threshold -0.4";
    RunResult flat = run(base);
    RunResult grouped = run(base + " --cluster 2.0");
    CHECK(flat.code == 0);
    CHECK(grouped.code == 0);
    auto rows = [](const std::string& out) {
        return std::count(out.begin(), out.end(), '\n') - 1;
    };
    CHECK(rows(flat.out) == 23);
    CHECK(rows(grouped.out) == 9);

    // The grouped table keeps the deepest member of each group, so the
    // globally deepest row survives grouping verbatim.
    std::string deepest;
    double best = 0.0;
    std::istringstream lines(flat.out);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const double sigma = std::stod(line.substr(c1 + 1));
        if (sigma < best) {
            best = sigma;
            deepest = line;
        }
    }
    REQUIRE(!deepest.empty());
    CHECK(has(grouped.out, deepest + "\n"));
}

TEST_CASE("cli scan distinguishes missing files from missing coverage") {
    RunResult gone = run("scan --zeros " + cli_tmp("gone.mhz1") +
                         " --range 1 2 --T 50");
    CHECK(gone.code == 4);
    CHECK(has(gone.err, "not found"));

    const std::string cache = ref_cache_path();
    RunResult high = run("scan --zeros " + cache + " --range 1 2 --T 200");
    CHECK(high.code == 4);
    CHECK(has(high.err, "exceeds"));

    RunResult norange = run("scan --zeros " + cache + " --T 50");
    CHECK(norange.code == 5);
    CHECK(has(norange.err, "--range"));

    RunResult badstep = run("scan --zeros " + cache +
                            " --range 1 2 --T 50 --step bogus");
    CHECK(badstep.code == 5);
}

TEST_CASE("cli refine sharpens a scan candidate") {
    const std::string cache = ref_cache_path();
    const std::string args =
        "refine --zeros " + cache +
        " --y 17.42 --T1 50 --T2 90 --step 1e-4 --width 0.01";

    mh::ZeroSet zs = mh::cache_read(cache);
    mh::Candidate cand;
    cand.y = 17.42;
    cand.T = 50.0;
    cand.width = 0.01;
    const mh::dd step2 = mh::parse_decimal_dd("1e-4");
    mh::Candidate refined = mh::refine(cand, zs, 90.0, step2);

    RunResult r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out == mh::candidates_csv({refined}, step2, 4));
    CHECK(run(args).out == r.out);

    RunResult shallow = run("refine --zeros " + cache +
                            " --y 17.42 --T1 50 --T2 50 --step 1e-4");
    CHECK(shallow.code == 5);
}

TEST_CASE("cli certify accepts a supplied sum and certifies the window") {
    const std::string flags =
        "certify --omega 495.702833137 --c 280 --eps 2.8e-8 --H 1e11 "
        "--a 0.4 --T 4e9 --sum-override=-1.00015419";

    RunResult r = run(flags);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("schema") == "mh-report-v1");
    CHECK(j.at("verdict") == "negative-certified");
    CHECK(j.at("zero_sum_source") == "unverified input");
    CHECK(j.at("total_upper_bound").get<double>() < -0.000154);
    CHECK(j.at("input").at("h") == 1);

    RunResult t = run(flags + " --format text");
    CHECK(t.code == 0);
    CHECK(has(t.out, "verdict: negative-certified"));
    CHECK(has(t.out, "x_lo_log: 495.702833109000"));
    CHECK(has(t.out, "x_hi_log: 495.702833165000"));
    CHECK(has(t.out, "(unverified input)"));
    const double persistence = std::stod(
        t.out.substr(t.out.find("persistence_log: ") + 17));
    CHECK(persistence >= 239.046541);

    // A sum with no margin cannot certify anything.
    RunResult weak = run(
        "certify --omega 495.702833137 --c 280 --eps 2.8e-8 --H 1e11 "
        "--a 0.4 --T 4e9 --sum-override=0");
    CHECK(weak.code == 1);
    CHECK(json::parse(weak.out).at("verdict") == "inconclusive");
}

TEST_CASE("cli certify computes the sum from a cache when no override") {
    // A synthetic evenly-spaced table would fail import's density checks,
    // but a cache written directly only promises ordering, which is all the
    // summation needs.  Parameters are chosen so every gate value is an
    // exact double: eps = 3/4096, c = 3 gives c/eps = 4096, and a = 1/4
    // gives a summed cutoff of exactly 1024.
    const std::string cache = cli_tmp("synth.mhz1");
    mh::ZeroSet zs;
    for (int k = 0; k <= 2100; ++k) zs.gammas.push_back(14.1347 + 0.5 * k);
    zs.precision = 1e-6;
    zs.rh_verified_height = 0.0;
    mh::cache_write(zs, cache);

    const std::string flags =
        "certify --zeros " + cache +
        " --omega 495.702833137 --c 3 --eps 0.000732421875 --H 1e4 "
        "--a 0.25 --T 1024";
    RunResult r = run(flags);
    CHECK(r.code == 1);  // tiny H: the bounds dwarf any sum
    json j = json::parse(r.out);
    CHECK(j.at("zero_sum_source") == "computed");
    CHECK(j.at("verdict") == "inconclusive");

    const mh::KernelParams params =
        mh::KernelParams::validated(3.0, 0.000732421875);
    mh::WeightedZeroSum sum = mh::kernel_weighted_sum(
        zs, mh::parse_decimal_dd("495.702833137"), params, 1024.0);
    CHECK(j.at("zero_sum").get<double>() == sum.value);
}

TEST_CASE("cli certify rejects inconsistent or missing parameters") {
    RunResult wide = run(
        "certify --omega 495.702833137 --c 280 --eps 0.01 --H 1e11 "
        "--a 0.4 --T 4e9 --sum-override=-1");
    CHECK(wide.code == 5);
    CHECK(has(wide.err, "eps"));

    RunResult nosum = run(
        "certify --omega 495.702833137 --c 280 --eps 2.8e-8 --H 1e11 "
        "--a 0.4 --T 4e9");
    CHECK(nosum.code == 5);
    CHECK(has(nosum.err, "--zeros is required"));
}

TEST_CASE("cli oracle cross-checks the explicit formula against the sieve") {
    const std::string cache = ref_cache_path();
    RunResult r = run("oracle --zeros " + cache +
                      " --x 1000 --x 10000 --T 90");
    CHECK(r.code == 0);
    REQUIRE(has(r.out, "x,sieve,formula,|diff|\n"));

    // The sieve column is exactly the library's prime-power reciprocal sum.
    const mh::PrimeTable table = mh::sieve_primes(10002);
    CHECK(has(r.out, "1000," + g17(mh::pi_m_star(1000.0, table)) + ","));
    CHECK(has(r.out, "10000," + g17(mh::pi_m_star(10000.0, table)) + ","));
    CHECK(run("oracle --zeros " + cache + " --x 1000 --x 10000 --T 90").out ==
          r.out);

    RunResult js = run("oracle --zeros " + cache +
                       " --x 1000 --T 90 --format json");
    CHECK(js.code == 0);
    json j = json::parse(js.out);
    CHECK(j.at("schema") == "mh-oracle-v1");
    CHECK(j.at("rows").size() == 1);
    // With only 29 ordinates the formula is rough, but it still lands
    // within the first decimal.
    CHECK(std::abs(j.at("rows")[0].at("abs_diff").get<double>()) < 0.1);

    CHECK(run("oracle --zeros " + cache + " --x 1 --T 50").code == 5);
    CHECK(run("oracle --zeros " + cache + " --x 1000 --T 200").code == 4);
    CHECK(run("oracle --zeros " + cache + " --x 2e9 --T 50").code == 4);
}

TEST_CASE("cli sieve-check confirms positivity over a small range") {
    RunResult r = run("sieve-check --limit 100000");
    CHECK(r.code == 0);
    CHECK(has(r.out, "primes: 9592"));
    CHECK(has(r.out, "verdict: all-positive"));

    RunResult js = run("sieve-check --limit 100000 --format json");
    CHECK(js.code == 0);
    json j = json::parse(js.out);
    CHECK(j.at("schema") == "mh-sieve-check-v1");
    CHECK(j.at("primes") == 9592);
    CHECK(j.at("min_delta").get<double>() > 0.0);
    CHECK(j.at("verdict") == "all-positive");
}

TEST_CASE("cli mertens-constant output matches the library") {
    const mh::MertensConstants mc = mh::mertens_constant(1e-9);
    RunResult r = run("mertens-constant");
    CHECK(r.code == 0);
    CHECK(r.out == "mertens_m: " + g17(mc.mertens_m) + "\neuler_c0: " +
                       g17(mc.euler_c0) + "\ntail_bound: " +
                       g17(mc.tail_bound) + "\n");

    RunResult js = run("mertens-constant --format json");
    json j = json::parse(js.out);
    CHECK(j.at("mertens_m").get<double>() == mc.mertens_m);
    CHECK(j.at("euler_c0").get<double>() == mc.euler_c0);
}

TEST_CASE("cli usage errors and help") {
    CHECK(run("--help").code == 0);
    CHECK(run("certify --help").code == 0);
    CHECK(run("scan --bogus-flag").code == 5);
    CHECK(run("").code == 5);
    CHECK(run("scan --zeros x --range 1 2 --T 50 --format xml").code == 5);
}

TEST_CASE("cli resolves bare cache names against MH_CACHE_DIR") {
    const char* dir = std::getenv("MH_TEST_TMP");
    REQUIRE(dir != nullptr);
    const std::string env = "MH_CACHE_DIR=" + std::string(dir) + " ";
    const std::string txt = cli_tmp("envzeros.txt");
    put_file(txt, ref_zero_lines());
    std::remove((std::string(dir) + "/cli_envzeros.mhz1").c_str());

    RunResult imp = run("zeros import " + txt, env);
    CHECK(imp.code == 0);
    CHECK(has(imp.out, std::string(dir) + "/cli_envzeros.mhz1"));

    RunResult sc = run(
        "scan --zeros cli_envzeros.mhz1 --range 1 50 --step 1e-2 --T 50 "
        "--threshold -0.5",
        env);
    CHECK(sc.code == 0);
    CHECK(has(sc.out, "17.42,"));
}
