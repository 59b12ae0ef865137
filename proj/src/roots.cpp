#include "semithermo/roots.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace semithermo {

namespace {

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

double backward_error(std::span<const cplx> c, cplx z)
{
    const double scale = abs_horner(c, std::abs(z));
    return scale > 0.0 ? std::abs(horner(c, z)) / scale : 0.0;
}

void require_degree(std::span<const cplx> coeffs)
{
    if (coeffs.size() < 2 || coeffs.back() == cplx(0.0)) {
        throw DegenerateEquation("root finder needs degree >= 1 with a nonzero leading coefficient");
    }
}

} // namespace

std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, const RootOptions& opts)
{
    require_degree(coeffs);
    const int m = static_cast<int>(coeffs.size()) - 1;
    const cplx lead = coeffs.back();

    double radius = 0.0;
    for (int k = 0; k < m; ++k) {
        radius = std::max(radius, std::abs(coeffs[static_cast<std::size_t>(k)] / lead));
    }
    radius += 1.0;

    // Offset angle keeps the start off any symmetry axis of real polynomials.
    std::vector<cplx> z(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / m + 0.4;
        z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }

    const double tiny = 4.0 * m * kMachEps;
    std::vector<bool> done(static_cast<std::size_t>(m), false);
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        bool all_done = true;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (done[k]) {
                continue;
            }
            cplx p, dp;
            horner_with_derivative(coeffs, z[k], p, dp);
            const double scale = abs_horner(coeffs, std::abs(z[k]));
            if (std::abs(p) <= tiny * scale) {
                done[k] = true;
                continue;
            }
            all_done = false;
            cplx s = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j != k) {
                    cplx diff = z[k] - z[j];
                    if (diff == cplx(0.0)) {
                        diff = cplx(tiny * (1.0 + std::abs(z[k])), 0.0);
                    }
                    s += 1.0 / diff;
                }
            }
            const cplx denom = dp - p * s;
            cplx step = denom != cplx(0.0) ? p / denom : cplx(tiny * radius, tiny * radius);
            z[k] -= step;
        }
        if (all_done) {
            break;
        }
    }

    for (const auto& r : z) {
        const double err = backward_error(coeffs, r);
        if (!(err <= opts.eps_root)) {
            throw NonConvergence(fmt::format("Aberth iteration left backward error {:.3e} > {:.1e} (degree {})",
                                             err, opts.eps_root, m));
        }
    }
    return z;
}

std::vector<cplx> low_degree_roots(std::span<const cplx> coeffs)
{
    require_degree(coeffs);
    if (coeffs.size() == 2) {
        return {-coeffs[0] / coeffs[1]};
    }
    if (coeffs.size() != 3) {
        throw PreconditionError("low_degree_roots handles degree 1 and 2 only");
    }
    const cplx a = coeffs[2];
    const cplx b = coeffs[1];
    const cplx c = coeffs[0];
    cplx disc = std::sqrt(b * b - 4.0 * a * c);
    if ((std::conj(b) * disc).real() < 0.0) {
        disc = -disc;
    }
    const cplx q = -0.5 * (b + disc);
    if (q == cplx(0.0)) {
        return {cplx(0.0), cplx(0.0)};
    }
    return {q / a, c / q};
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, const RootOptions& opts)
{
    if (coeffs.size() <= 3) {
        return low_degree_roots(coeffs);
    }
    return aberth_roots(coeffs, opts);
}

std::vector<Root> cluster_roots(std::span<const cplx> roots, double eps_cluster)
{
    std::vector<Root> out;
    std::vector<cplx> sums;
    for (const auto& r : roots) {
        bool merged = false;
        for (std::size_t c = 0; c < out.size(); ++c) {
            if (std::abs(out[c].point.value() - r) <= eps_cluster) {
                sums[c] += r;
                out[c].multiplicity += 1;
                out[c].point = SpherePoint(sums[c] / static_cast<double>(out[c].multiplicity));
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.push_back(Root{SpherePoint(r), 1});
            sums.push_back(r);
        }
    }
    return out;
}

} // namespace semithermo
