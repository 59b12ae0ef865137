// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include "semithermo/box_dimension.hpp"
#include "semithermo/cli.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/manifest.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/pressure.hpp"
#include "semithermo/render.hpp"
#include "semithermo/rng.hpp"
#include "semithermo/roots.hpp"
#include "semithermo/shrink.hpp"
#include "semithermo/spectrum.hpp"
#include "support/companion_oracle.hpp"
#include "support/corpus.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace semithermo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kLog2 = std::numbers::ln2;

struct CorpusEntry {
    SemigroupSpec spec;
    SpherePoint base;
    SpherePoint base_alt;
};

std::vector<CorpusEntry> corpus_entries()
{
    return {{corpus::z2(), SpherePoint(1.0), SpherePoint(1.3)},
            {corpus::z2m2(), SpherePoint(1.0), SpherePoint(1.3)},
            {corpus::z2pm2(), SpherePoint(1.0), SpherePoint(1.3)}};
}

std::vector<double> grid13()
{
    std::vector<double> g;
    for (int k = 0; k <= 12; ++k) {
        g.push_back(0.2 * k);
    }
    return g;
}

GridSpec square(int n)
{
    GridSpec g;
    g.width = n;
    g.height = n;
    return g;
}

int cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    return run_cli(args, out, err);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<std::string, std::string> key_values(const fs::path& p)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return kv;
}

const std::string kSpecs = SEMITHERMO_SPEC_DIR;

Outcome c1_analytic_pressure()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const PressureEstimator p(corpus::z2(), SpherePoint(1.0), 10);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0, 1.5}) {
        worst = std::max(worst, std::abs(p(t) - (1.0 - t) * kLog2));
    }
    const double secs = seconds_since(t0);
    o.require(worst <= 1e-9, fmt::format("max |P - (1-t)log2| = {:.2e}", worst));
    o.require(secs < 5.0, fmt::format("runtime {:.2f}s", secs));
    o.note(fmt::format("max error {:.2e}, {:.2f}s", worst, secs));
    return o;
}

Outcome c2_degree_count()
{
    Outcome o;
    const auto spec = corpus::z2pm2();
    const double p0 = estimate_pressure(spec, SpherePoint(1.0), 0.0, 8);
    o.require(std::abs(p0 - std::log(4.0)) <= 1e-12, fmt::format("P(0) = {:.17g}", p0));
    const auto tree = enumerate_tree(spec, SpherePoint(1.0), 6);
    for (int k = 0; k <= 6; ++k) {
        const auto expect = static_cast<std::size_t>(std::pow(4, k));
        o.require(tree.level(k).size() == expect, fmt::format("level {} has {} nodes", k, tree.level(k).size()));
    }
    o.note(fmt::format("P(0) - log 4 = {:.1e}", p0 - std::log(4.0)));
    return o;
}

Outcome c3_bowen_roots()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const double h1 = bowen_root(corpus::z2(), SpherePoint(1.0), 10).h;
    const double h2 = bowen_root(corpus::z2m2(), SpherePoint(1.0), 10).h;
    const double h3 = bowen_root(corpus::z2pm2(), SpherePoint(1.0), 8).h;
    const double secs = seconds_since(t0);
    o.require(std::abs(h1 - 1.0) <= 1e-3, fmt::format("z^2 h = {}", h1));
    o.require(std::abs(h2 - 1.0) <= 0.02, fmt::format("z^2-2 h = {}", h2));
    o.require(h3 > 1.0 && h3 < 2.0, fmt::format("<z^2+2,z^2-2> h = {}", h3));
    o.require(secs < 120.0, fmt::format("runtime {:.1f}s", secs));
    o.note(fmt::format("h = {:.6f}, {:.6f}, {:.6f} in {:.2f}s", h1, h2, h3, secs));
    return o;
}

Outcome c4_shape_laws()
{
    Outcome o;
    const auto curve = pressure_curve(corpus::z2pm2(), SpherePoint(1.0), SpherePoint(1.3), grid13(), 8);
    double worst_mono = -1e300;
    double worst_conv = 1e300;
    for (std::size_t i = 1; i < curve.estimates.size(); ++i) {
        worst_mono = std::max(worst_mono, curve.estimates[i] - curve.estimates[i - 1]);
    }
    for (std::size_t i = 1; i + 1 < curve.estimates.size(); ++i) {
        worst_conv =
            std::min(worst_conv, curve.estimates[i + 1] - 2 * curve.estimates[i] + curve.estimates[i - 1]);
    }
    o.require(worst_mono < 0.0, fmt::format("largest increment {:.3e}", worst_mono));
    o.require(worst_conv >= -kTauConv, fmt::format("smallest second difference {:.3e}", worst_conv));
    o.require(curve.violations.empty(), fmt::format("{} recorded violations", curve.violations.size()));
    o.note(fmt::format("max increment {:.4f}, min second difference {:.2e}", worst_mono, worst_conv));
    return o;
}

Outcome c5_base_independence()
{
    Outcome o;
    for (const auto& e : corpus_entries()) {
        const auto curve = pressure_curve(e.spec, e.base, e.base_alt, grid13(), 8);
        o.require(curve.cross_check_gap <= 5e-3, fmt::format("{} gap {:.2e}", e.spec.name, curve.cross_check_gap));
        o.note(fmt::format("{} gap {:.1e}", e.spec.name, curve.cross_check_gap));
    }
    return o;
}

Outcome c6_temperature()
{
    Outcome o;
    const PressureEstimator p(corpus::z2pm2(), SpherePoint(1.0), 8);
    const double h = bowen_root(p).h;
    double worst_end = 0.0;
    double worst_res = 0.0;
    for (double t : {0.6, 0.8, 1.2}) {
        worst_end = std::max(worst_end, std::abs(temperature(p, t, 0.0).value - h));
        worst_end = std::max(worst_end, std::abs(temperature(p, t, 1.0).value));
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double T = temperature(p, t, q).value;
            worst_res = std::max(worst_res, std::abs(p(T + q * t) - q * p(t)));
        }
    }
    o.require(worst_end <= 2e-3, fmt::format("endpoint error {:.2e}", worst_end));
    o.require(worst_res <= 2e-3, fmt::format("residual {:.2e}", worst_res));
    o.note(fmt::format("endpoint error {:.1e}, residual {:.1e}", worst_end, worst_res));
    return o;
}

Outcome c7_degeneracy()
{
    Outcome o;
    const std::vector<double> q{0.0, 0.25, 0.5, 0.75, 1.0};
    const PressureEstimator flat(corpus::z2(), SpherePoint(1.0), 10);
    const double curv = max_curvature(flat, grid13());
    const auto table = spectrum_table(flat, 0.8, q);
    double dim_dev = 0.0;
    for (const auto& r : table.rows) {
        dim_dev = std::max(dim_dev, std::abs(r.dim - 1.0));
    }
    o.require(curv < 1e-3, fmt::format("z^2 curvature {:.2e}", curv));
    o.require(table.chi_spread < 1e-3, fmt::format("z^2 chi spread {:.2e}", table.chi_spread));
    o.require(dim_dev <= 1e-3, fmt::format("z^2 dim deviation {:.2e}", dim_dev));
    const PressureEstimator pm(corpus::z2pm2(), SpherePoint(1.0), 8);
    const auto t2 = spectrum_table(pm, 0.8, q);
    o.require(t2.chi_spread > 1e-2, fmt::format("<z^2+2,z^2-2> chi spread {:.3e}", t2.chi_spread));
    o.note(fmt::format("z^2 curvature {:.1e}, chi spread {:.1e}, dim dev {:.1e}; pair chi spread {:.4f}", curv,
                       table.chi_spread, dim_dev, t2.chi_spread));
    return o;
}

Outcome c8_fiber_dimension()
{
    Outcome o;
    const auto spec = corpus::z2pm2();
    const double h = bowen_root(spec, SpherePoint(1.0), 8).h;
    // Box sides of 8, 4, 2 and 1 pixels at 2048^2.
    const KRange range{8, 11};
    for (const char* rule : {"const:1", "const:2", "periodic:12"}) {
        const auto f = render_fiber(spec, WordRule::parse(rule, 0), square(2048), 200);
        const BoxFit fit = box_dimension(f.julia, range);
        o.require(fit.slope <= h - 0.05, fmt::format("{} dim {:.4f} > h - 0.05", rule, fit.slope));
        o.require(fit.r2 >= 0.98, fmt::format("{} r2 {:.4f}", rule, fit.r2));
        if (std::string(rule) == "const:2") {
            o.require(std::abs(fit.slope - 1.0) <= 0.1, fmt::format("const:2 dim {:.4f}", fit.slope));
        }
        o.note(fmt::format("{} dim {:.3f} r2 {:.4f}", rule, fit.slope, fit.r2));
    }
    o.note(fmt::format("h - 0.05 = {:.3f}", h - 0.05));
    return o;
}

Outcome c9_osc()
{
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "semithermo_acceptance_osc";
    fs::remove_all(dir);
    int status = cli({"osc-check", "--spec", kSpecs + "/z2pm2.json", "--disc", "0,0,2", "--seed", "1", "--out",
                      (dir / "pair").string()});
    o.require(status == 0, fmt::format("osc-check exit {}", status));
    auto kv = key_values(dir / "pair" / "osc_report.txt");
    const double margin = std::stod(kv["containment_margin"]);
    o.require(kv["verdict"] == "pass", "verdict " + kv["verdict"]);
    o.require(margin > 0.0, fmt::format("containment margin {}", margin));
    double nearest = 1e9;
    std::istringstream touches(slurp(dir / "pair" / "touch_points.csv"));
    std::string line;
    std::getline(touches, line);
    while (std::getline(touches, line)) {
        const auto comma = line.find(',');
        nearest = std::min(nearest, std::abs(cplx(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)))));
    }
    o.require(nearest <= 1e-3, fmt::format("nearest touch point at distance {}", nearest));

    status = cli({"osc-check", "--spec", kSpecs + "/z2z2.json", "--disc", "0,0,1", "--seed", "1", "--out",
                  (dir / "dup").string()});
    kv = key_values(dir / "dup" / "osc_report.txt");
    o.require(status == 0 && kv["verdict"] == "fail", "duplicate-generator control verdict " + kv["verdict"]);
    o.note(fmt::format("containment margin {:.4f}, touch point at |z| = {:.1e}, control {}", margin, nearest,
                       kv["verdict"]));
    return o;
}

Outcome c10_conformal()
{
    Outcome o;
    double worst_mass = 0.0;
    double worst_qi = 0.0;
    auto entries = corpus_entries();
    entries.push_back({corpus::z2z2(), SpherePoint(1.0), SpherePoint(1.3)});
    for (const auto& e : entries) {
        for (double t : {0.0, 0.5, 1.0, 2.0}) {
            const PressureEstimator p(e.spec, e.base, 8);
            const auto m = conformal_atoms(e.spec, e.base, t, p(t) + 0.1, 8);
            worst_mass = std::max(worst_mass, std::abs(m.total_mass() - 1.0));
            worst_qi = std::max(worst_qi, quasi_invariance_defect(e.spec, m));
        }
        bool guarded = false;
        try {
            const double pt = estimate_pressure(e.spec, e.base, 1.0, 8);
            conformal_atoms(e.spec, e.base, 1.0, pt - 0.01, 8);
        } catch (const SeriesNotSummable&) {
            guarded = true;
        }
        o.require(guarded, e.spec.name + " summability guard did not trigger");
    }
    o.require(worst_mass <= 1e-12, fmt::format("mass error {:.2e}", worst_mass));
    o.require(worst_qi <= 1e-9, fmt::format("quasi-invariance defect {:.2e}", worst_qi));
    o.note(fmt::format("mass error {:.1e}, quasi-invariance defect {:.1e}", worst_mass, worst_qi));
    return o;
}

Outcome c11_transfer()
{
    Outcome o;
    for (const auto& e : corpus_entries()) {
        const GridImage img = render_global(e.spec, 400000, 5, GridSpec{});
        const auto grid = grid_from_render(e.spec, img, 32);
        o.require(grid.size() >= 32, fmt::format("{} grid has {} points", e.spec.name, grid.size()));
        const PressureEstimator est(e.spec, e.base, 8);
        const double h = bowen_root(est).h;
        for (double t : {0.0, h}) {
            const auto tc = transfer_operator_check(e.spec, grid, t, 8);
            const auto pv = est.evaluate(t);
            const double gap = std::abs(tc.value - pv.value);
            o.require(gap <= tc.spread + pv.spread,
                      fmt::format("{} t={:.4f} gap {:.2e} > spreads {:.2e}", e.spec.name, t, gap, tc.spread + pv.spread));
            if (t > 0.0) {
                o.note(fmt::format("{} at h: gap {:.1e} <= {:.1e}", e.spec.name, gap, tc.spread + pv.spread));
            }
        }
    }
    return o;
}

Outcome c12_shrink()
{
    Outcome o;
    const auto a = shrink_rate(corpus::z2(), 1.0, 0.1, 8);
    const auto b = shrink_rate(corpus::z2pm2(), cplx(0.0, 0.5), 0.1, 8);
    o.require(std::abs(a.alpha_hat - kLog2) <= 0.1, fmt::format("z^2 alpha {:.4f}", a.alpha_hat));
    o.require(b.alpha_hat > 0.0, fmt::format("pair alpha {:.4f}", b.alpha_hat));
    o.note(fmt::format("z^2 alpha {:.4f}, pair alpha {:.4f}", a.alpha_hat, b.alpha_hat));
    return o;
}

Outcome c13_reproducibility()
{
    Outcome o;
    const std::vector<std::vector<std::string>> commands{
        {"render-global", "--iterations", "200000"},
        {"render-fiber", "--word-rule", "random"},
        {"boxdim", "--iterations", "200000"},
        {"osc-check"},
        {"diagnose-clt", "--t", "1.5", "--n-samples", "2000"},
    };
    const fs::path root = fs::temp_directory_path() / "semithermo_acceptance_repro";
    fs::remove_all(root);
    int checked = 0;
    for (const auto& cmd : commands) {
        std::vector<fs::path> dirs;
        for (const char* run : {"a", "b"}) {
            const fs::path dir = root / (cmd.front() + "_" + run);
            std::vector<std::string> args = cmd;
            args.insert(args.end(), {"--spec", kSpecs + "/z2pm2.json", "--seed", "2024", "--out", dir.string()});
            o.require(cli(args) == 0, cmd.front() + " failed");
            o.require(verify_manifest(dir.string()).ok, cmd.front() + " manifest does not verify");
            dirs.push_back(dir);
        }
        for (const auto& art : read_manifest(dirs[0].string()).artifacts) {
            o.require(slurp(dirs[0] / art.name) == slurp(dirs[1] / art.name), cmd.front() + "/" + art.name + " differs");
            ++checked;
        }
        o.require(slurp(dirs[0] / kManifestName) == slurp(dirs[1] / kManifestName), cmd.front() + " manifests differ");
    }
    o.note(fmt::format("{} artifacts byte-identical across reruns", checked));
    return o;
}

Outcome c14_root_oracle()
{
    Outcome o;
    SplitMix64 rng(14);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int deg = 1 + static_cast<int>(rng.below(6));
        Coeffs c;
        for (int k = 0; k <= deg; ++k) {
            c.emplace_back(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
        }
        const double d = oracle::match_distance(polynomial_roots(c), oracle::companion_roots(c));
        worst = std::max(worst, d);
    }
    o.require(worst <= RootOptions{}.eps_cluster, fmt::format("worst pairing distance {:.2e}", worst));
    o.note(fmt::format("500 polynomials, worst pairing distance {:.1e}", worst));
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"analytic pressure oracle", c1_analytic_pressure},
        {"degree-count law", c2_degree_count},
        {"Bowen roots", c3_bowen_roots},
        {"shape laws of P", c4_shape_laws},
        {"base-point independence", c5_base_independence},
        {"temperature-function pinning", c6_temperature},
        {"exceptional degeneracy detector", c7_degeneracy},
        {"fiber < global", c8_fiber_dimension},
        {"OSC verification", c9_osc},
        {"conformal-measure algebra", c10_conformal},
        {"transfer-operator cross-validation", c11_transfer},
        {"shrink rate", c12_shrink},
        {"reproducibility", c13_reproducibility},
        {"root-finder oracle equivalence", c14_root_oracle},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        failures += out.pass ? 0 : 1;
        std::cout << fmt::format("[{}] criterion {:2d} {}: {} ({:.1f}s)\n", out.pass ? "PASS" : "FAIL", i + 1,
                                 criteria[i].first, out.detail, seconds_since(t0))
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
