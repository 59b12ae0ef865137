#include "semithermo/shrink.hpp"
#include "semithermo/box_dimension.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/preimage_tree.hpp"
#include "tree_expand.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

namespace semithermo {

namespace {

struct Branch {
    SpherePoint center;
    std::vector<SpherePoint> ring;
};

double ring_diameter(const std::vector<SpherePoint>& ring)
{
    double d = 0.0;
    for (std::size_t a = 0; a < ring.size(); ++a) {
        for (std::size_t b = a + 1; b < ring.size(); ++b) {
            d = std::max(d, chordal_distance(ring[a], ring[b]));
        }
    }
    return d;
}

SpherePoint nearest_root(const RationalMap& g, const SpherePoint& w, const SpherePoint& near)
{
    const PreimageSet pre = preimages(g, w);
    const SpherePoint* best = nullptr;
    double best_d = 3.0;
    for (const auto& r : pre.roots) {
        const double d = chordal_distance(r.point, near);
        if (d < best_d) {
            best_d = d;
            best = &r.point;
        }
    }
    if (best == nullptr) {
        throw NonConvergence("no preimage found while pulling back a ring sample");
    }
    return *best;
}

std::vector<Branch> children_of(const SemigroupSpec& spec, const Branch& parent, std::vector<detail::Child>& scratch)
{
    detail::expand(spec, parent.center, kDeltaCrit, RootOptions{}, scratch);
    std::vector<Branch> out;
    out.reserve(scratch.size());
    for (const auto& c : scratch) {
        const RationalMap& g = spec.generators[c.generator];
        Branch b{c.point, {}};
        b.ring.reserve(parent.ring.size());
        SpherePoint prev = c.point;
        for (const auto& w : parent.ring) {
            prev = nearest_root(g, w, prev);
            b.ring.push_back(prev);
        }
        out.push_back(std::move(b));
    }
    return out;
}

void descend(const SemigroupSpec& spec, const Branch& node, int level, int n_max, std::vector<double>& diam,
             std::vector<detail::Child>& scratch)
{
    diam[static_cast<std::size_t>(level)] = std::max(diam[static_cast<std::size_t>(level)], ring_diameter(node.ring));
    if (level == n_max) {
        return;
    }
    for (const auto& child : children_of(spec, node, scratch)) {
        descend(spec, child, level + 1, n_max, diam, scratch);
    }
}

} // namespace

ShrinkFit shrink_rate(const SemigroupSpec& spec, cplx xi, double radius, int n_max)
{
    if (n_max < 2) {
        throw ScaleRangeSaturated(fmt::format("shrink fit needs n_max >= 2, got {}", n_max));
    }
    if (!(radius > 0.0)) {
        throw PreconditionError("shrink radius must be positive");
    }
    for (const auto& p : spec.pcv_samples) {
        if (p.is_finite() && std::abs(p.value() - xi) <= 4.0 * radius) {
            throw PreconditionError(fmt::format("ball B({}{:+}i, {}) is within 4r of postcritical sample {}{:+}i",
                                                xi.real(), xi.imag(), radius, p.value().real(), p.value().imag()));
        }
    }

    Branch root{SpherePoint(xi), {}};
    for (int k = 0; k < kShrinkBoundarySamples; ++k) {
        root.ring.emplace_back(xi + std::polar(radius, 2.0 * std::numbers::pi * k / kShrinkBoundarySamples));
    }

    std::vector<double> diam(static_cast<std::size_t>(n_max) + 1, 0.0);
    diam[0] = ring_diameter(root.ring);

    std::vector<detail::Child> scratch;
    std::vector<Branch> frontier{root};
    int level = 0;
    while (level < n_max && level < 2) {
        std::vector<Branch> next;
        for (const auto& b : frontier) {
            for (auto& c : children_of(spec, b, scratch)) {
                next.push_back(std::move(c));
            }
        }
        frontier = std::move(next);
        ++level;
        for (const auto& b : frontier) {
            diam[static_cast<std::size_t>(level)] = std::max(diam[static_cast<std::size_t>(level)], ring_diameter(b.ring));
        }
    }

    const auto n_front = static_cast<long>(frontier.size());
    std::vector<std::vector<double>> partial(frontier.size(), std::vector<double>(diam.size(), 0.0));
    std::vector<std::exception_ptr> errors(frontier.size());
#pragma omp parallel
    {
        std::vector<detail::Child> local;
#pragma omp for schedule(dynamic)
        for (long i = 0; i < n_front; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            try {
                descend(spec, frontier[ui], level, n_max, partial[ui], local);
            } catch (...) {
                errors[ui] = std::current_exception();
            }
        }
    }
    detail::rethrow_first(errors);
    for (const auto& p : partial) {
        for (std::size_t k = 0; k < diam.size(); ++k) {
            diam[k] = std::max(diam[k], p[k]);
        }
    }

    std::vector<double> ks;
    std::vector<double> logs;
    for (std::size_t k = 0; k < diam.size(); ++k) {
        ks.push_back(static_cast<double>(k));
        logs.push_back(std::log(diam[k]));
    }
    const LineFit fit = least_squares(ks, logs);
    ShrinkFit out;
    out.alpha_hat = -fit.slope;
    out.c_hat = std::exp(fit.intercept);
    out.r2 = fit.r2;
    out.max_diameter = std::move(diam);
    return out;
}

void write_csv(std::ostream& os, const ShrinkFit& fit)
{
    fmt::print(os, "# alpha_hat={:.17g}\n# c_hat={:.17g}\n# r2={:.17g}\n", fit.alpha_hat, fit.c_hat, fit.r2);
    os << "k,max_diameter\n";
    for (std::size_t k = 0; k < fit.max_diameter.size(); ++k) {
        fmt::print(os, "{},{:.17g}\n", k, fit.max_diameter[k]);
    }
}

} // namespace semithermo
