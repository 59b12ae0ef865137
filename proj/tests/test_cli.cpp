#include "semithermo/cli.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/manifest.hpp"
#include "semithermo/spec_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace semithermo;
namespace fs = std::filesystem;

namespace {

const std::string kSpecs = SEMITHERMO_SPEC_DIR;

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("semithermo_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("parse_spec on the shipped example")
{
    const auto spec = parse_spec(kSpecs + "/z2pm2.json");
    REQUIRE(spec.size() == 2);
    CHECK(spec.generators[0].degree() == 2);
    CHECK(spec.generators[1].degree() == 2);
    CHECK(spec.escape_radius.has_value());
}

TEST_CASE("parse_spec errors")
{
    CHECK_THROWS_AS(parse_spec_text(R"({"generators": []})"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_spec_text(R"({"generators": [{"num": [-1, 0, 1], "den": [-1, 1]}]})"),
                         doctest::Contains("common factor"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_spec_text("{\n  \"generators\": [,]\n}"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(parse_spec_text(R"({"generators": [{"den": [1]}]})"), ParseError);
    CHECK_THROWS_AS(parse_spec_text(R"({"generators": [{"num": [[1, 2, 3]]}]})"), ParseError);
    CHECK_THROWS_AS(parse_spec("/nonexistent/spec.json"), ParseError);
}

TEST_CASE("spec JSON round trip")
{
    const auto spec = parse_spec_text(R"({"name": "r", "generators": [{"num": [1, 0, [0, 2]], "den": [0.5, 1]}]})");
    const auto back = parse_spec_text(spec_to_json(spec));
    CHECK(back.name == "r");
    CHECK(back.generators[0].numerator() == spec.generators[0].numerator());
    CHECK(back.generators[0].denominator() == spec.generators[0].denominator());
}

TEST_CASE("sha256 known answer")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("unknown subcommand and bad flags exit with status 2")
{
    auto r = cli({"frobnicate"});
    CHECK(r.status == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({}).status == 2);
    CHECK(cli({"render-fiber", "--spec", kSpecs + "/z2pm2.json", "--word-rule", "const:1", "--grid", "abc"}).status ==
          2);
    CHECK(cli({"render-global", "--spec", kSpecs + "/z2pm2.json", "--out", fresh_dir("noseed").string()}).status == 2);
    CHECK(cli({"pressure", "--spec", kSpecs + "/z2.json", "--tol", "nonsense=1"}).status == 2);
}

TEST_CASE("module errors exit with status 1")
{
    const fs::path dir = fresh_dir("err");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << R"({"generators": [{"num": [1, 1]}]})";
    auto r = cli({"dimension", "--spec", (dir / "bad.json").string(), "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("ValidationError") != std::string::npos);
    r = cli({"conformal", "--spec", kSpecs + "/z2pm2.json", "--t", "1", "--s", "0.2", "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("SeriesNotSummable") != std::string::npos);
}

TEST_CASE("dimension writes bowen.csv with the root and bracket")
{
    const fs::path dir = fresh_dir("dimension");
    const auto r = cli({"dimension", "--spec", kSpecs + "/z2pm2.json", "--depth", "8", "--out", dir.string()});
    REQUIRE(r.status == 0);
    std::istringstream csv(slurp(dir / "bowen.csv"));
    std::string header;
    std::string row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "h,bracket_lo,bracket_hi,residual,depth");
    const double h = std::stod(row.substr(0, row.find(',')));
    CHECK(std::abs(h - 1.556480103997760) < 1e-3);
    CHECK(verify_manifest(dir.string()).ok);
}

TEST_CASE("osc-check passes on z2pm2 with disc (0, 2)")
{
    const fs::path dir = fresh_dir("osc");
    const auto r = cli({"osc-check", "--spec", kSpecs + "/z2pm2.json", "--disc", "0,0,2", "--seed", "1", "--out",
                        dir.string()});
    REQUIRE(r.status == 0);
    CHECK(slurp(dir / "osc_report.txt").rfind("verdict=pass\n", 0) == 0);
}

TEST_CASE("stochastic subcommands are byte-reproducible and manifests verify")
{
    const std::vector<std::vector<std::string>> commands{
        {"render-global", "--iterations", "20000", "--grid", "64x64"},
        {"render-fiber", "--word-rule", "random", "--grid", "64x64"},
        {"osc-check", "--n-interior", "64"},
        {"diagnose-clt", "--t", "1.5", "--n-samples", "200", "--n-block", "10"},
    };
    for (const auto& cmd : commands) {
        const fs::path a = fresh_dir("repro_a");
        const fs::path b = fresh_dir("repro_b");
        auto full = [&](const fs::path& dir, const char* threads) {
            std::vector<std::string> args = cmd;
            args.insert(args.end(), {"--spec", kSpecs + "/z2pm2.json", "--seed", "42", "--out", dir.string(),
                                     "--threads", threads});
            return args;
        };
        REQUIRE(cli(full(a, "1")).status == 0);
        REQUIRE(cli(full(b, "2")).status == 0);
        const Manifest ma = read_manifest(a.string());
        CHECK(ma.seed == std::optional<std::uint64_t>(42));
        CHECK_FALSE(ma.artifacts.empty());
        for (const auto& art : ma.artifacts) {
            CHECK(slurp(a / art.name) == slurp(b / art.name));
        }
        CHECK(slurp(a / kManifestName) == slurp(b / kManifestName));
        CHECK(cli({"verify", "--out", a.string()}).status == 0);
    }
}

TEST_CASE("verify detects tampering")
{
    const fs::path dir = fresh_dir("tamper");
    REQUIRE(cli({"shrink-rate", "--spec", kSpecs + "/z2.json", "--depth", "4", "--out", dir.string()}).status == 0);
    std::ofstream(dir / "shrink.csv", std::ios::app) << "extra\n";
    const auto r = cli({"verify", "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK(r.out.find("hash mismatch") != std::string::npos);
}

TEST_CASE("every subcommand produces its artifacts")
{
    const std::string z2pm2 = kSpecs + "/z2pm2.json";
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> runs{
        {{"pressure", "--spec", z2pm2, "--depth", "6"}, {"pressure.csv"}},
        {{"spectrum", "--spec", z2pm2, "--depth", "6", "--t", "0.8"}, {"spectrum.csv"}},
        {{"render-fiber", "--spec", z2pm2, "--word-rule", "const:2", "--grid", "64x64"},
         {"fiber_escape.pgm", "fiber_julia.pgm"}},
        {{"boxdim", "--spec", z2pm2, "--word-rule", "const:2", "--grid", "512x512"}, {"boxdim.csv"}},
        {{"shrink-rate", "--spec", z2pm2, "--xi", "0,0.5", "--depth", "5"}, {"shrink.csv"}},
        {{"conformal", "--spec", z2pm2, "--depth", "5", "--t", "1", "--s", "1"}, {"atoms.csv", "conformal_report.txt"}},
    };
    for (const auto& [args, files] : runs) {
        const fs::path dir = fresh_dir("all");
        std::vector<std::string> full = args;
        full.push_back("--out");
        full.push_back(dir.string());
        const auto r = cli(full);
        INFO(args.front(), " ", r.err);
        REQUIRE(r.status == 0);
        for (const auto& f : files) {
            CHECK(fs::exists(dir / f));
        }
        CHECK(verify_manifest(dir.string()).ok);
    }
}
