#include "semithermo/semigroup.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semithermo {

std::string Word::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0) {
            out += '.';
        }
        out += std::to_string(static_cast<int>(symbols[i]) + 1);
    }
    return out;
}

Word Word::parse(const std::string& text)
{
    Word w;
    if (text.empty()) {
        return w;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, '.')) {
        const int v = std::stoi(item);
        if (v < 1 || v > 255) {
            throw ParseError(fmt::format("word symbol '{}' out of range", item));
        }
        w.symbols.push_back(static_cast<std::uint8_t>(v - 1));
    }
    return w;
}

int SemigroupSpec::total_degree() const
{
    int s = 0;
    for (const auto& g : generators) {
        s += g.degree();
    }
    return s;
}

bool SemigroupSpec::all_polynomial() const
{
    return std::all_of(generators.begin(), generators.end(), [](const RationalMap& g) { return g.is_polynomial(); });
}

double SemigroupSpec::pcv_distance(const SpherePoint& z) const
{
    double best = 2.0;
    for (const auto& p : pcv_samples) {
        best = std::min(best, chordal_distance(z, p));
    }
    return best;
}

namespace {

double polynomial_escape_radius(const RationalMap& g)
{
    const Coeffs& a = g.numerator();
    const double lead = std::abs(a.back());
    double lower = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        lower += std::abs(a[k]);
    }
    // |z| > R >= 1 gives |g(z)| >= |z| (|a_d| R - sum_{k<d} |a_k|) >= 2|z|.
    return std::max({4.0, 1.0 + lower + lead, (2.0 + lower) / lead});
}

void push_unique(std::vector<SpherePoint>& pts, const SpherePoint& p)
{
    for (const auto& q : pts) {
        if (chordal_distance(p, q) < 1e-12) {
            return;
        }
    }
    pts.push_back(p);
}

} // namespace

SemigroupSpec make_semigroup(std::vector<RationalMap> generators, std::string name, const SemigroupOptions& opts)
{
    if (generators.empty()) {
        throw ValidationError("generator list is empty");
    }
    if (generators.size() > 255) {
        throw ValidationError("at most 255 generators are supported");
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].degree() < 2) {
            throw ValidationError(fmt::format(
                "generator {} has degree 1; Moebius generators are not supported", i + 1));
        }
    }

    SemigroupSpec spec;
    spec.name = std::move(name);
    spec.generators = std::move(generators);

    if (spec.all_polynomial()) {
        double r = 0.0;
        for (const auto& g : spec.generators) {
            r = std::max(r, polynomial_escape_radius(g));
        }
        spec.escape_radius = r;
    }

    std::vector<SpherePoint> frontier;
    for (const auto& g : spec.generators) {
        std::vector<SpherePoint> crit;
        for (const auto& c : critical_points(g, opts.roots)) {
            crit.push_back(c.point);
            if (c.point.is_finite()) {
                push_unique(spec.crit_samples, c.point);
            }
            push_unique(frontier, evaluate(g, c.point));
        }
        spec.critical_by_generator.push_back(std::move(crit));
    }

    auto keep = [&](const SpherePoint& p) {
        if (!spec.escape_radius) {
            return true;
        }
        return p.is_finite() && std::abs(p.value()) <= *spec.escape_radius;
    };

    for (const auto& p : frontier) {
        if (keep(p)) {
            push_unique(spec.pcv_samples, p);
        }
    }
    for (int depth = 1; depth <= opts.pcv_depth; ++depth) {
        std::vector<SpherePoint> next;
        for (const auto& p : frontier) {
            for (const auto& g : spec.generators) {
                const SpherePoint q = evaluate(g, p);
                if (keep(q)) {
                    const std::size_t before = spec.pcv_samples.size();
                    push_unique(spec.pcv_samples, q);
                    if (spec.pcv_samples.size() > before) {
                        next.push_back(q);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return spec;
}

RationalMap compose_word(const SemigroupSpec& spec, const Word& word, int max_depth)
{
    if (static_cast<int>(word.size()) > max_depth) {
        throw DepthExceeded(fmt::format("word length {} exceeds max compose depth {}", word.size(), max_depth));
    }
    for (auto s : word.symbols) {
        if (s >= spec.size()) {
            throw PreconditionError(fmt::format("word symbol {} out of range", s + 1));
        }
    }
    if (word.empty()) {
        return RationalMap::unchecked({cplx(0.0), cplx(1.0)}, {cplx(1.0)});
    }
    RationalMap m = spec.generators[word.symbols.front()];
    for (std::size_t k = 1; k < word.size(); ++k) {
        m = compose(spec.generators[word.symbols[k]], m);
    }
    return m;
}

} // namespace semithermo
