#include "semithermo/cli.hpp"
#include "semithermo/box_dimension.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/manifest.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/osc.hpp"
#include "semithermo/pressure.hpp"
#include "semithermo/render.hpp"
#include "semithermo/shrink.hpp"
#include "semithermo/spec_io.hpp"
#include "semithermo/spectrum.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#ifndef SEMITHERMO_VERSION
#define SEMITHERMO_VERSION "0.0.0"
#endif

namespace semithermo {

namespace {

namespace fs = std::filesystem;

/// Malformed flag value; reported with usage and exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string& s, const std::string& flag)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError(fmt::format("{}: '{}' is not a number", flag, s));
    }
}

int to_int(const std::string& s, const std::string& flag)
{
    const double v = to_double(s, flag);
    if (v != static_cast<double>(static_cast<int>(v))) {
        throw UsageError(fmt::format("{}: '{}' is not an integer", flag, s));
    }
    return static_cast<int>(v);
}

std::vector<double> number_list(const std::string& s, std::size_t expected, const std::string& flag)
{
    std::vector<double> out;
    for (const auto& p : split(s, ',')) {
        out.push_back(to_double(p, flag));
    }
    if (expected != 0 && out.size() != expected) {
        throw UsageError(fmt::format("{} expects {} comma-separated numbers", flag, expected));
    }
    return out;
}

cplx point_arg(const std::string& s, const std::string& flag)
{
    const auto v = number_list(s, 0, flag);
    if (v.size() == 1) {
        return {v[0], 0.0};
    }
    if (v.size() == 2) {
        return {v[0], v[1]};
    }
    throw UsageError(fmt::format("{} expects re or re,im", flag));
}

/// "a:b:n" (n evenly spaced points) or a comma list.
std::vector<double> grid_arg(const std::string& s, const std::string& flag)
{
    if (s.find(':') != std::string::npos) {
        const auto p = split(s, ':');
        if (p.size() != 3) {
            throw UsageError(fmt::format("{} expects a:b:n or a comma list", flag));
        }
        const double a = to_double(p[0], flag);
        const double b = to_double(p[1], flag);
        const int n = to_int(p[2], flag);
        if (n < 2) {
            throw UsageError(fmt::format("{}: need at least 2 points", flag));
        }
        std::vector<double> out;
        for (int k = 0; k < n; ++k) {
            out.push_back(a + (b - a) * k / (n - 1));
        }
        return out;
    }
    return number_list(s, 0, flag);
}

GridSpec grid_spec(const std::string& size, const std::string& bbox)
{
    GridSpec g;
    const auto wh = split(size, 'x');
    if (wh.size() != 2) {
        throw UsageError("--grid expects WxH");
    }
    g.width = to_int(wh[0], "--grid");
    g.height = to_int(wh[1], "--grid");
    if (!bbox.empty()) {
        const auto b = number_list(bbox, 4, "--bbox");
        g.bbox = BBox{b[0], b[1], b[2], b[3]};
    }
    return g;
}

struct Tolerances {
    std::map<std::string, double> values{
        {"tol_t", 1e-3},       {"tau_mono", kTauMono},     {"tau_conv", kTauConv},
        {"delta_pcv", kDeltaPcv}, {"delta_crit", kDeltaCrit}, {"eps_root", 1e-12},
        {"eps_cluster", 1e-7}, {"prune_threshold", 0.0},
    };

    void set(const std::string& assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw UsageError(fmt::format("--tol expects name=value, got '{}'", assignment));
        }
        const std::string name = assignment.substr(0, eq);
        if (!values.contains(name)) {
            throw UsageError(fmt::format("--tol: unknown tolerance '{}'", name));
        }
        values[name] = to_double(assignment.substr(eq + 1), "--tol");
    }

    double operator[](const std::string& name) const { return values.at(name); }

    TreeOptions tree() const
    {
        TreeOptions o;
        o.delta_pcv = values.at("delta_pcv");
        o.delta_crit = values.at("delta_crit");
        o.roots.eps_root = values.at("eps_root");
        o.roots.eps_cluster = values.at("eps_cluster");
        if (values.at("prune_threshold") > 0.0) {
            o.prune.enabled = true;
            o.prune.threshold = values.at("prune_threshold");
        }
        return o;
    }
};

struct Options {
    std::string spec_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int depth = 8;
    int threads = 0;
    std::vector<std::string> tol;

    std::string base;
    std::string base_alt;
    std::string t_grid = "0:2.4:13";
    double t = 0.8;
    double s = 0.0;
    std::string q_grid = "0,0.25,0.5,0.75,1";
    std::string grid = "512x512";
    std::string bbox;
    std::string word_rule;
    std::uint64_t iterations = 1000000;
    int max_iter = 200;
    std::string image;
    std::string k_range = "2:9";
    std::string disc = "0,0,2";
    int n_boundary = 256;
    int n_interior = 1024;
    std::string xi = "1,0";
    double radius = 0.1;
    int n_block = 50;
    std::uint64_t n_samples = 10000;
};

/// Candidate base points, tried in order; the first two far enough from the
/// postcritical samples are used.
std::pair<SpherePoint, SpherePoint> default_bases(const SemigroupSpec& spec)
{
    const cplx candidates[] = {{1.0, 0.0}, {1.3, 0.0}, {0.5, 0.5}, {-0.7, 0.3}, {0.0, 0.25}, {-1.2, -0.9}};
    std::vector<SpherePoint> ok;
    for (const auto& c : candidates) {
        if (spec.pcv_distance(SpherePoint(c)) > 0.05) {
            ok.emplace_back(c);
        }
    }
    if (ok.size() < 2) {
        throw PreconditionError("no default base point clears the postcritical samples; pass --base and --base-alt");
    }
    return {ok[0], ok[1]};
}

class Runner {
public:
    Runner(const Options& o, std::string sub, std::vector<std::string> recorded, std::ostream& out)
        : o_(o), sub_(std::move(sub)), recorded_(std::move(recorded)), out_(out)
    {
        for (const auto& a : o_.tol) {
            tol_.set(a);
        }
    }

    int run()
    {
        if (sub_ == "verify") {
            return verify();
        }
        if (o_.spec_path.empty()) {
            throw UsageError("--spec is required");
        }
        spec_ = parse_spec(o_.spec_path);
        spec_hash_ = sha256_file(o_.spec_path);
        fs::create_directories(o_.out_dir);

        if (sub_ == "pressure") {
            pressure();
        } else if (sub_ == "dimension") {
            dimension();
        } else if (sub_ == "spectrum") {
            spectrum();
        } else if (sub_ == "render-global") {
            render_global_cmd();
        } else if (sub_ == "render-fiber") {
            render_fiber_cmd();
        } else if (sub_ == "boxdim") {
            boxdim();
        } else if (sub_ == "osc-check") {
            osc();
        } else if (sub_ == "shrink-rate") {
            shrink();
        } else if (sub_ == "conformal") {
            conformal();
        } else if (sub_ == "diagnose-clt") {
            clt();
        }

        Manifest m;
        m.version = SEMITHERMO_VERSION;
        m.subcommand = sub_;
        m.args = recorded_;
        m.spec_name = spec_.name;
        m.spec_sha256 = spec_hash_;
        m.seed = used_seed_;
        write_manifest(o_.out_dir, m, artifacts_);
        for (const auto& a : artifacts_) {
            fmt::print(out_, "wrote {}\n", (fs::path(o_.out_dir) / a).string());
        }
        return 0;
    }

private:
    std::uint64_t need_seed(const std::string& why)
    {
        if (!o_.seed) {
            throw UsageError(fmt::format("--seed is required for {}", why));
        }
        used_seed_ = o_.seed;
        return *o_.seed;
    }

    std::pair<SpherePoint, SpherePoint> bases() const
    {
        auto [a, b] = default_bases(spec_);
        if (!o_.base.empty()) {
            a = SpherePoint(point_arg(o_.base, "--base"));
        }
        if (!o_.base_alt.empty()) {
            b = SpherePoint(point_arg(o_.base_alt, "--base-alt"));
        }
        return {a, b};
    }

    void emit(const std::string& name, const std::string& data)
    {
        std::ofstream f(fs::path(o_.out_dir) / name, std::ios::binary);
        f << data;
        if (!f) {
            throw PreconditionError(fmt::format("cannot write '{}' into '{}'", name, o_.out_dir));
        }
        artifacts_.push_back(name);
    }

    template <class F>
    void emit_stream(const std::string& name, F&& fill)
    {
        std::ostringstream os;
        fill(os);
        emit(name, os.str());
    }

    void pressure()
    {
        const auto [a, b] = bases();
        PressureEstimator main(spec_, a, o_.depth, kDefaultKAvg, tol_.tree());
        PressureEstimator alt(spec_, b, o_.depth, kDefaultKAvg, tol_.tree());
        PressureCurve curve = pressure_curve(main, alt, grid_arg(o_.t_grid, "--t-grid"));
        curve.violations.clear();
        check_shape_laws(curve, tol_["tau_mono"], tol_["tau_conv"]);
        emit_stream("pressure.csv", [&](std::ostream& os) { write_csv(os, curve); });
        for (const auto& v : curve.violations) {
            fmt::print(out_, "shape-law violation: {}\n", v);
        }
    }

    void dimension()
    {
        const auto [a, b] = bases();
        (void)b;
        PressureEstimator est(spec_, a, o_.depth, kDefaultKAvg, tol_.tree());
        const BowenResult r = bowen_root(est, tol_["tol_t"]);
        emit_stream("bowen.csv", [&](std::ostream& os) { write_csv(os, r); });
        fmt::print(out_, "h={:.17g}\n", r.h);
    }

    void spectrum()
    {
        const auto [a, b] = bases();
        (void)b;
        PressureEstimator est(spec_, a, o_.depth, kDefaultKAvg, tol_.tree());
        const SpectrumTable table = spectrum_table(est, o_.t, grid_arg(o_.q_grid, "--q-grid"), tol_["tol_t"]);
        emit_stream("spectrum.csv", [&](std::ostream& os) { write_csv(os, table, o_.seed.value_or(0)); });
        for (const auto& v : table.violations) {
            fmt::print(out_, "invariant violation: {}\n", v);
        }
    }

    void render_global_cmd()
    {
        const std::uint64_t seed = need_seed("render-global");
        const GridImage img = render_global(spec_, o_.iterations, seed, grid_spec(o_.grid, o_.bbox));
        emit("global.pgm", to_pgm(img));
    }

    WordRule word_rule()
    {
        if (o_.word_rule == "random") {
            return WordRule::parse(o_.word_rule, need_seed("--word-rule random"));
        }
        try {
            return WordRule::parse(o_.word_rule, 0);
        } catch (const PreconditionError& e) {
            throw UsageError(e.what());
        } catch (const ParseError& e) {
            throw UsageError(e.what());
        }
    }

    void render_fiber_cmd()
    {
        if (o_.word_rule.empty()) {
            throw UsageError("render-fiber needs --word-rule");
        }
        const FiberRender f = render_fiber(spec_, word_rule(), grid_spec(o_.grid, o_.bbox), o_.max_iter);
        emit("fiber_escape.pgm", to_pgm(f.escape_time, static_cast<std::uint32_t>(f.max_iter)));
        emit("fiber_julia.pgm", to_pgm(f.julia));
    }

    void boxdim()
    {
        const auto kr = split(o_.k_range, ':');
        if (kr.size() != 2) {
            throw UsageError("--k-range expects a:b");
        }
        const KRange range{to_int(kr[0], "--k-range"), to_int(kr[1], "--k-range")};
        const GridSpec g = grid_spec(o_.grid, o_.bbox);
        std::string source;
        std::optional<GridImage> img;
        if (!o_.image.empty()) {
            img = read_pgm(o_.image, g.bbox);
            source = "image";
        } else if (!o_.word_rule.empty()) {
            img = render_fiber(spec_, word_rule(), g, o_.max_iter).julia;
            source = "fiber:" + o_.word_rule;
        } else {
            img = render_global(spec_, o_.iterations, need_seed("boxdim on a global render"), g);
            source = "global";
        }
        const BoxFit fit = box_dimension(*img, range);
        emit_stream("boxdim.csv", [&](std::ostream& os) {
            fmt::print(os, "# source={}\n", source);
            write_csv(os, fit);
        });
        fmt::print(out_, "dimension={:.17g} r2={:.17g}\n", fit.slope, fit.r2);
    }

    void osc()
    {
        const auto d = number_list(o_.disc, 3, "--disc");
        const OscReport r =
            osc_check(spec_, Disc{{d[0], d[1]}, d[2]}, o_.n_boundary, o_.n_interior, need_seed("osc-check"));
        emit_stream("osc_report.txt", [&](std::ostream& os) { write_report(os, r); });
        emit_stream("touch_points.csv", [&](std::ostream& os) {
            os << "re,im\n";
            for (const auto& p : r.closure_touch_points) {
                fmt::print(os, "{:.17g},{:.17g}\n", p.real(), p.imag());
            }
        });
        fmt::print(out_, "verdict={}\n", r.pass ? "pass" : "fail");
    }

    void shrink()
    {
        const ShrinkFit fit = shrink_rate(spec_, point_arg(o_.xi, "--xi"), o_.radius, o_.depth);
        emit_stream("shrink.csv", [&](std::ostream& os) { write_csv(os, fit); });
        fmt::print(out_, "alpha_hat={:.17g}\n", fit.alpha_hat);
    }

    void conformal()
    {
        const auto [a, b] = bases();
        (void)b;
        const AtomMeasure m = conformal_atoms(spec_, a, o_.t, o_.s, o_.depth, tol_.tree());
        const double defect = quasi_invariance_defect(spec_, m);
        emit_stream("atoms.csv", [&](std::ostream& os) { write_csv(os, m); });
        emit_stream("conformal_report.txt", [&](std::ostream& os) { write_report(os, m, defect); });
    }

    void clt()
    {
        const CltReport r = birkhoff_diagnostics(spec_, o_.t, o_.n_block, o_.n_samples, need_seed("diagnose-clt"));
        emit_stream("clt_report.txt", [&](std::ostream& os) { write_report(os, r); });
    }

    int verify()
    {
        const ManifestCheck c = verify_manifest(o_.out_dir);
        for (const auto& p : c.problems) {
            fmt::print(out_, "{}\n", p);
        }
        fmt::print(out_, "manifest {}\n", c.ok ? "ok" : "FAILED");
        return c.ok ? 0 : 1;
    }

    const Options& o_;
    std::string sub_;
    std::vector<std::string> recorded_;
    std::ostream& out_;
    Tolerances tol_;
    SemigroupSpec spec_;
    std::string spec_hash_;
    std::optional<std::uint64_t> used_seed_;
    std::vector<std::string> artifacts_;
};

/// Arguments as recorded in the manifest: everything except the output
/// directory and thread count, which do not affect artifact bytes.
std::vector<std::string> recorded_args(const std::vector<std::string>& args)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--out" || a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) {
            continue;
        }
        out.push_back(a);
    }
    return out;
}

void apply_threads(int requested)
{
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("SEMITHERMO_THREADS")) {
            n = std::atoi(env);
        }
    }
    if (n > 0) {
        omp_set_num_threads(n);
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Thermodynamic formalism toolkit for finitely generated rational semigroups", "semithermo"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--spec", o.spec_path, "Semigroup spec JSON file");
    app.add_option("--out", o.out_dir, "Output directory");
    app.add_option("--seed", o.seed, "64-bit PRNG seed");
    app.add_option("--depth", o.depth, "Tree depth n")->check(CLI::Range(1, 40));
    app.add_option("--threads", o.threads, "Worker thread cap (default: SEMITHERMO_THREADS, then all cores)");
    app.add_option("--tol", o.tol, "Tolerance override name=value (repeatable)");

    std::string chosen;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->callback([&chosen, name] { chosen = name; });
        return s;
    };
    auto with_bases = [&](CLI::App* s) {
        s->add_option("--base", o.base, "Base point re,im");
        s->add_option("--base-alt", o.base_alt, "Second base point re,im");
    };
    auto with_grid = [&](CLI::App* s) {
        s->add_option("--grid", o.grid, "Raster size WxH");
        s->add_option("--bbox", o.bbox, "re_min,re_max,im_min,im_max");
    };

    CLI::App* p = sub("pressure", "Pressure curve on a t grid");
    with_bases(p);
    p->add_option("--t-grid", o.t_grid, "a:b:n or comma list");

    with_bases(sub("dimension", "Bowen root of the pressure"));

    CLI::App* sp = sub("spectrum", "Temperature function and dimension spectrum");
    with_bases(sp);
    sp->add_option("--t", o.t, "Parameter t");
    sp->add_option("--q-grid", o.q_grid, "Comma list of q in [0,1]");

    CLI::App* rg = sub("render-global", "Chaos-game render of J(G)");
    with_grid(rg);
    rg->add_option("--iterations", o.iterations, "Chaos game steps after burn-in");

    CLI::App* rf = sub("render-fiber", "Escape-time render of a fiber Julia set");
    with_grid(rf);
    rf->add_option("--word-rule", o.word_rule, "const:i | periodic:p1p2... | random");
    rf->add_option("--max-iter", o.max_iter, "Escape iterations");

    CLI::App* bd = sub("boxdim", "Box-counting dimension of a render");
    with_grid(bd);
    bd->add_option("--image", o.image, "Existing occupancy PGM");
    bd->add_option("--word-rule", o.word_rule, "Render this fiber instead of J(G)");
    bd->add_option("--max-iter", o.max_iter, "Escape iterations for fibers");
    bd->add_option("--iterations", o.iterations, "Chaos game steps for J(G)");
    bd->add_option("--k-range", o.k_range, "k_min:k_max");

    CLI::App* oc = sub("osc-check", "Open Set Condition test on a round disc");
    oc->add_option("--disc", o.disc, "re,im,radius");
    oc->add_option("--n-boundary", o.n_boundary, "Boundary samples");
    oc->add_option("--n-interior", o.n_interior, "Interior samples");

    CLI::App* sr = sub("shrink-rate", "Exponential shrinking rate of pullbacks (n_max = --depth)");
    sr->add_option("--xi", o.xi, "Ball center re,im");
    sr->add_option("--radius", o.radius, "Ball radius");

    CLI::App* cf = sub("conformal", "Atomic approximation of nu_{t,s} (n_max = --depth)");
    with_bases(cf);
    cf->add_option("--t", o.t, "Parameter t");
    cf->add_option("--s", o.s, "Series exponent s > P(t)")->required();

    CLI::App* cl = sub("diagnose-clt", "Birkhoff sum diagnostics along sampled backward orbits");
    cl->add_option("--t", o.t, "Parameter t");
    cl->add_option("--n-block", o.n_block, "Orbit block length");
    cl->add_option("--n-samples", o.n_samples, "Number of orbits");

    sub("verify", "Check the manifest in --out against artifact hashes");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        fmt::print(err, "error: {}\n\n{}", e.what(), app.help());
        return 2;
    }

    apply_threads(o.threads);
    try {
        Runner runner(o, chosen, recorded_args(args), out);
        return runner.run();
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n\n{}", e.what(), app.help());
        return 2;
    } catch (const Error& e) {
        fmt::print(err, "{}\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return 1;
    }
}

} // namespace semithermo
