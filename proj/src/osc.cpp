#include "semithermo/osc.hpp"
#include "semithermo/errors.hpp"
#include "semithermo/rng.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace semithermo {

namespace {

std::vector<cplx> finite_preimages(const RationalMap& g, cplx w)
{
    std::vector<cplx> out;
    for (const auto& r : preimages(g, SpherePoint(w)).roots) {
        if (r.point.is_finite()) {
            for (int m = 0; m < r.multiplicity; ++m) {
                out.push_back(r.point.value());
            }
        }
    }
    return out;
}

double min_cloud_distance(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a) {
        for (const auto& y : b) {
            best = std::min(best, std::abs(x - y));
        }
    }
    return best;
}

} // namespace

OscReport osc_check(const SemigroupSpec& spec, const Disc& disc, int n_boundary, int n_interior, std::uint64_t seed)
{
    if (!(disc.radius > 0.0) || n_boundary < 4 || n_interior < 1) {
        throw PreconditionError("osc_check needs a positive radius, >= 4 boundary and >= 1 interior samples");
    }
    const std::size_t u = spec.size();

    std::vector<cplx> boundary(static_cast<std::size_t>(n_boundary));
    for (int k = 0; k < n_boundary; ++k) {
        boundary[static_cast<std::size_t>(k)] =
            disc.center + std::polar(disc.radius, 2.0 * std::numbers::pi * k / n_boundary);
    }
    std::vector<cplx> interior{disc.center};
    SplitMix64 rng(seed);
    for (int k = 1; k < n_interior; ++k) {
        const double r = disc.radius * std::sqrt(rng.uniform());
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        interior.push_back(disc.center + std::polar(r, a));
    }

    std::vector<std::vector<cplx>> pre_interior(u);
    std::vector<std::vector<cplx>> pre_boundary(u);
    std::vector<std::vector<std::size_t>> boundary_source(u);
    for (std::size_t i = 0; i < u; ++i) {
        for (const auto& w : interior) {
            for (const auto& p : finite_preimages(spec.generators[i], w)) {
                pre_interior[i].push_back(p);
            }
        }
        for (std::size_t b = 0; b < boundary.size(); ++b) {
            for (const auto& p : finite_preimages(spec.generators[i], boundary[b])) {
                pre_boundary[i].push_back(p);
                boundary_source[i].push_back(b);
            }
        }
    }

    OscReport rep;
    rep.containment_margin = std::numeric_limits<double>::infinity();
    double closure_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u; ++i) {
        for (const auto& p : pre_interior[i]) {
            rep.containment_margin = std::min(rep.containment_margin, disc.radius - std::abs(p - disc.center));
        }
        for (const auto& p : pre_boundary[i]) {
            closure_margin = std::min(closure_margin, disc.radius - std::abs(p - disc.center));
        }
    }
    // Boundary preimages may touch the circle, but not leave the closed disc.
    if (closure_margin < -1e-9 * disc.radius) {
        rep.containment_margin = std::min(rep.containment_margin, closure_margin);
    }

    rep.disjointness_margin = std::numeric_limits<double>::infinity();
    rep.cloud_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u; ++i) {
        for (std::size_t j = 0; j < u; ++j) {
            if (i == j) {
                continue;
            }
            for (const auto& p : pre_interior[i]) {
                const SpherePoint fp = evaluate(spec.generators[j], SpherePoint(p));
                const double outside = fp.is_infinite() ? std::numeric_limits<double>::infinity()
                                                        : std::abs(fp.value() - disc.center) - disc.radius;
                rep.disjointness_margin = std::min(rep.disjointness_margin, outside);
            }
            if (j > i) {
                rep.cloud_separation = std::min({rep.cloud_separation,
                                                 min_cloud_distance(pre_interior[i], pre_interior[j]),
                                                 min_cloud_distance(pre_boundary[i], pre_boundary[j])});
                for (const auto& a : pre_boundary[i]) {
                    for (const auto& b : pre_boundary[j]) {
                        if (std::abs(a - b) < kTouchDistance) {
                            const cplx mid = 0.5 * (a + b);
                            const bool known = std::any_of(rep.closure_touch_points.begin(),
                                                           rep.closure_touch_points.end(),
                                                           [&](cplx q) { return std::abs(q - mid) < 1e-3; });
                            if (!known && rep.closure_touch_points.size() < 64) {
                                rep.closure_touch_points.push_back(mid);
                            }
                        }
                    }
                }
            }
        }
    }
    rep.pass = rep.containment_margin > 0.0 && rep.disjointness_margin >= 0.0;
    return rep;
}

void write_report(std::ostream& os, const OscReport& r)
{
    fmt::print(os, "verdict={}\n", r.pass ? "pass" : "fail");
    fmt::print(os, "containment_margin={:.17g}\n", r.containment_margin);
    fmt::print(os, "disjointness_margin={:.17g}\n", r.disjointness_margin);
    fmt::print(os, "cloud_separation={:.17g}\n", r.cloud_separation);
    fmt::print(os, "density_condition=satisfied_by_round_disc\n");
    fmt::print(os, "closure_touch_points={}\n", r.closure_touch_points.size());
    for (std::size_t i = 0; i < r.closure_touch_points.size(); ++i) {
        fmt::print(os, "touch_point_{}={:.17g},{:.17g}\n", i, r.closure_touch_points[i].real(),
                   r.closure_touch_points[i].imag());
    }
}

} // namespace semithermo
