#include "semithermo/render.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/rng.hpp"

#include <fmt/format.h>

#include <cmath>

namespace semithermo {

SpherePoint find_repelling_seed(const SemigroupSpec& spec)
{
    for (const auto& g : spec.generators) {
        // f(z) = z  <=>  N(z) - z D(z) = 0
        Coeffs eq = g.padded_numerator();
        eq.push_back(cplx(0.0));
        const auto& den = g.padded_denominator();
        for (std::size_t k = 0; k < den.size(); ++k) {
            eq[k + 1] -= den[k];
        }
        const Coeffs poly = trimmed(eq, kEpsLead);
        if (poly.size() < 2) {
            continue;
        }
        for (const auto& z : polynomial_roots(poly)) {
            if (spherical_derivative(g, z) > 1.0 + 1e-9) {
                return SpherePoint(z);
            }
        }
    }
    throw NoRepellingSeed("no generator has a finite repelling fixed point");
}

std::vector<cplx> chaos_game_points(const SemigroupSpec& spec, std::uint64_t iterations, std::uint64_t seed)
{
    SpherePoint z = find_repelling_seed(spec);
    SplitMix64 rng(seed);
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(iterations));
    std::vector<SpherePoint> branches;
    for (std::uint64_t step = 0; step < iterations + kChaosBurnIn; ++step) {
        const auto& g = spec.generators[rng.below(spec.size())];
        const auto pre = preimages(g, z);
        branches.clear();
        for (const auto& r : pre.roots) {
            for (int m = 0; m < r.multiplicity; ++m) {
                branches.push_back(r.point);
            }
        }
        z = branches[rng.below(branches.size())];
        if (step >= kChaosBurnIn && z.is_finite()) {
            pts.push_back(z.value());
        }
    }
    return pts;
}

GridImage render_global(const SemigroupSpec& spec, std::uint64_t iterations, std::uint64_t seed, const GridSpec& grid)
{
    GridImage img(grid, PixelKind::Occupancy);
    for (const auto& z : chaos_game_points(spec, iterations, seed)) {
        if (auto px = img.pixel_of(z)) {
            img.at(px->first, px->second) = 1;
        }
    }
    return img;
}

WordRule WordRule::constant(int symbol)
{
    if (symbol < 1) {
        throw PreconditionError("word symbols are one-based");
    }
    WordRule r;
    r.kind_ = Kind::Constant;
    r.pattern_ = {symbol};
    return r;
}

WordRule WordRule::periodic(std::vector<int> pattern)
{
    if (pattern.empty()) {
        throw PreconditionError("periodic word rule needs a nonempty pattern");
    }
    for (int s : pattern) {
        if (s < 1) {
            throw PreconditionError("word symbols are one-based");
        }
    }
    WordRule r;
    r.kind_ = Kind::Periodic;
    r.pattern_ = std::move(pattern);
    return r;
}

WordRule WordRule::random(std::uint64_t seed)
{
    WordRule r;
    r.kind_ = Kind::Random;
    r.seed_ = seed;
    return r;
}

WordRule WordRule::parse(const std::string& text, std::uint64_t seed)
{
    if (text == "random") {
        return random(seed);
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ParseError(fmt::format("bad word rule '{}'", text));
    }
    const std::string head = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);
    if (head == "const") {
        return constant(std::stoi(body));
    }
    if (head == "periodic") {
        std::vector<int> pattern;
        for (char c : body) {
            if (c < '1' || c > '9') {
                throw ParseError(fmt::format("bad periodic pattern '{}'", body));
            }
            pattern.push_back(c - '0');
        }
        return periodic(std::move(pattern));
    }
    throw ParseError(fmt::format("bad word rule '{}'", text));
}

std::vector<std::uint8_t> WordRule::sequence(std::size_t length, std::size_t alphabet) const
{
    std::vector<std::uint8_t> seq(length);
    SplitMix64 rng(seed_);
    for (std::size_t k = 0; k < length; ++k) {
        int s = 0;
        switch (kind_) {
        case Kind::Constant:
            s = pattern_[0];
            break;
        case Kind::Periodic:
            s = pattern_[k % pattern_.size()];
            break;
        case Kind::Random:
            s = static_cast<int>(rng.below(alphabet)) + 1;
            break;
        }
        if (s < 1 || static_cast<std::size_t>(s) > alphabet) {
            throw PreconditionError(fmt::format("word symbol {} exceeds the {} generators", s, alphabet));
        }
        seq[k] = static_cast<std::uint8_t>(s - 1);
    }
    return seq;
}

std::string WordRule::to_string() const
{
    switch (kind_) {
    case Kind::Constant:
        return fmt::format("const:{}", pattern_[0]);
    case Kind::Periodic: {
        std::string s = "periodic:";
        for (int p : pattern_) {
            s += std::to_string(p);
        }
        return s;
    }
    case Kind::Random:
        return fmt::format("random(seed={})", seed_);
    }
    return {};
}

namespace {

constexpr int kDemExtraSteps = 64;
constexpr double kDemRadius = 1e10;

struct FiberSetup {
    std::vector<const Coeffs*> poly;
    std::vector<Coeffs> dpoly;
    std::vector<std::uint8_t> seq;
    double radius = 0.0;
    int max_iter = 0;
};

FiberSetup prepare(const SemigroupSpec& spec, const WordRule& rule, int max_iter)
{
    if (!spec.all_polynomial() || !spec.escape_radius) {
        throw NotPolynomial("fiber rendering needs polynomial generators");
    }
    if (max_iter < 1) {
        throw PreconditionError("max_iter must be >= 1");
    }
    FiberSetup s;
    for (const auto& g : spec.generators) {
        s.poly.push_back(&g.numerator());
        s.dpoly.push_back(derivative(g.numerator()));
    }
    s.seq = rule.sequence(static_cast<std::size_t>(max_iter + kDemExtraSteps), spec.size());
    s.radius = *spec.escape_radius;
    s.max_iter = max_iter;
    return s;
}

struct PixelResult {
    std::uint32_t escape = 0;
    bool near_julia = false;
};

PixelResult fiber_pixel(const FiberSetup& s, cplx z, double pixel)
{
    cplx dz = 1.0;
    for (int k = 0; k < s.max_iter; ++k) {
        const std::uint8_t g = s.seq[static_cast<std::size_t>(k)];
        dz *= horner(s.dpoly[g], z);
        z = horner(*s.poly[g], z);
        if (std::abs(z) > s.radius) {
            PixelResult r;
            r.escape = static_cast<std::uint32_t>(k + 1);
            // Continue to a large radius for the distance estimate
            // |z| log|z| / |z'|.
            for (int e = 1; e <= kDemExtraSteps && std::abs(z) < kDemRadius; ++e) {
                const std::uint8_t h = s.seq[static_cast<std::size_t>(k + e)];
                dz *= horner(s.dpoly[h], z);
                z = horner(*s.poly[h], z);
            }
            const double az = std::abs(z);
            const double dist = az * std::log(az) / std::abs(dz);
            r.near_julia = std::isfinite(dist) && dist < pixel;
            return r;
        }
    }
    return {};
}

void mark_boundary(FiberRender& out)
{
    auto& esc = out.escape_time;
    auto& jul = out.julia;
    const int w = esc.width();
    const int h = esc.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (esc.at(x, y) != 0) {
                continue;
            }
            const bool edge = (x > 0 && esc.at(x - 1, y) != 0) || (x + 1 < w && esc.at(x + 1, y) != 0) ||
                              (y > 0 && esc.at(x, y - 1) != 0) || (y + 1 < h && esc.at(x, y + 1) != 0);
            if (edge) {
                jul.at(x, y) = 1;
            }
        }
    }
}

} // namespace

FiberRender render_fiber(const SemigroupSpec& spec, const WordRule& rule, const GridSpec& grid, int max_iter)
{
    const FiberSetup setup = prepare(spec, rule, max_iter);
    FiberRender out{GridImage(grid, PixelKind::EscapeTime), GridImage(grid, PixelKind::Occupancy), max_iter};
    const double pixel = std::max(out.escape_time.pixel_width(), out.escape_time.pixel_height());
    const int h = grid.height;
    const int w = grid.width;
#pragma omp parallel for schedule(dynamic, 4)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const PixelResult r = fiber_pixel(setup, out.escape_time.center(x, y), pixel);
            out.escape_time.at(x, y) = r.escape;
            out.julia.at(x, y) = r.near_julia ? 1 : 0;
        }
    }
    mark_boundary(out);
    return out;
}

namespace reference {

FiberRender render_fiber(const SemigroupSpec& spec, const WordRule& rule, const GridSpec& grid, int max_iter)
{
    const FiberSetup setup = prepare(spec, rule, max_iter);
    FiberRender out{GridImage(grid, PixelKind::EscapeTime), GridImage(grid, PixelKind::Occupancy), max_iter};
    const double pixel = std::max(out.escape_time.pixel_width(), out.escape_time.pixel_height());
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const PixelResult r = fiber_pixel(setup, out.escape_time.center(x, y), pixel);
            out.escape_time.at(x, y) = r.escape;
            out.julia.at(x, y) = r.near_julia ? 1 : 0;
        }
    }
    mark_boundary(out);
    return out;
}

} // namespace reference

} // namespace semithermo
