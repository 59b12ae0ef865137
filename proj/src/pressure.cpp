#include "semithermo/pressure.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace semithermo {

PressureEstimator::PressureEstimator(const SemigroupSpec& spec, const SpherePoint& base, int depth, int k_avg,
                                     const TreeOptions& opts)
    : k_avg_(std::clamp(k_avg, 1, std::max(depth, 1)))
{
    if (k_avg < 1) {
        throw PreconditionError("k_avg must be >= 1");
    }
    profile_ = build_profile(spec, base, depth, depth - k_avg_, opts);
}

PressureValue PressureEstimator::evaluate(double t) const
{
    const int n = profile_.depth;
    std::vector<double> sums;
    for (int j = n - k_avg_; j <= n; ++j) {
        sums.push_back(tree_weight_sum(profile_, t, j));
    }
    double lo = INFINITY;
    double hi = -INFINITY;
    double total = 0.0;
    for (std::size_t j = 1; j < sums.size(); ++j) {
        const double inc = sums[j] - sums[j - 1];
        lo = std::min(lo, inc);
        hi = std::max(hi, inc);
        total += inc;
    }
    return {total / k_avg_, std::max(hi - lo, kSpreadFloor)};
}

double estimate_pressure(const SemigroupSpec& spec, const SpherePoint& base, double t, int depth, int k_avg,
                         const TreeOptions& opts)
{
    return PressureEstimator(spec, base, depth, k_avg, opts)(t);
}

void check_shape_laws(PressureCurve& curve, double tau_mono, double tau_conv)
{
    const auto& t = curve.t_grid;
    const auto& p = curve.estimates;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (p[i] > p[i - 1] + tau_mono) {
            curve.violations.push_back(
                fmt::format("monotonicity: P({:.6g}) = {:.9g} exceeds P({:.6g}) = {:.9g}", t[i], p[i], t[i - 1], p[i - 1]));
        }
    }
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double d2 = p[i + 1] - 2.0 * p[i] + p[i - 1];
        if (d2 < -tau_conv) {
            curve.violations.push_back(fmt::format("convexity: second difference {:.3e} at t = {:.6g}", d2, t[i]));
        }
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0.0 && p[i] < std::numbers::ln2 - 1e-9) {
            curve.violations.push_back(fmt::format("P(0) = {:.9g} is below log 2", p[i]));
        }
    }
}

PressureCurve pressure_curve(const PressureEstimator& main, const PressureEstimator& alt,
                             const std::vector<double>& t_grid)
{
    if (t_grid.empty()) {
        throw PreconditionError("empty t grid");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
            throw PreconditionError("t grid must be nonnegative and strictly increasing");
        }
    }
    PressureCurve curve;
    curve.t_grid = t_grid;
    curve.depth = main.depth();
    curve.k_avg = main.k_avg();
    curve.base_point = main.base_point();
    curve.base_point_alt = alt.base_point();
    curve.lipschitz_bound = main.lipschitz_bound();
    curve.estimates.resize(t_grid.size());
    curve.increment_spreads.resize(t_grid.size());
    curve.alt_estimates.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto v = main.evaluate(t_grid[i]);
        curve.estimates[i] = v.value;
        curve.increment_spreads[i] = v.spread;
        curve.alt_estimates[i] = alt(t_grid[i]);
        curve.cross_check_gap = std::max(curve.cross_check_gap, std::abs(v.value - curve.alt_estimates[i]));
    }
    check_shape_laws(curve);
    return curve;
}

PressureCurve pressure_curve(const SemigroupSpec& spec, const SpherePoint& base, const SpherePoint& base_alt,
                             const std::vector<double>& t_grid, int depth, int k_avg, const TreeOptions& opts)
{
    const PressureEstimator main(spec, base, depth, k_avg, opts);
    const PressureEstimator alt(spec, base_alt, depth, k_avg, opts);
    return pressure_curve(main, alt, t_grid);
}

BowenResult bowen_root(const PressureEstimator& pressure, double tol_t)
{
    if (!(tol_t > 0.0)) {
        throw PreconditionError("tol_t must be positive");
    }
    double lo = 0.0;
    double hi = 2.0;
    if (!(pressure(lo) > 0.0)) {
        throw NoSignChange(fmt::format("P(0) = {:.6g} is not positive", pressure(lo)));
    }
    while (pressure(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) {
            throw NoSignChange("pressure stays positive up to t = 64");
        }
    }
    while (hi - lo > tol_t) {
        const double mid = 0.5 * (lo + hi);
        if (pressure(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    BowenResult r;
    r.lo = lo;
    r.hi = hi;
    // Linear interpolation inside the final bracket; exact for affine P.
    const double p_lo = pressure(lo);
    const double p_hi = pressure(hi);
    r.h = p_lo > p_hi ? lo + (hi - lo) * p_lo / (p_lo - p_hi) : 0.5 * (lo + hi);
    r.h = std::clamp(r.h, lo, hi);
    r.residual = std::abs(pressure(r.h));
    r.depth = pressure.depth();
    return r;
}

BowenResult bowen_root(const SemigroupSpec& spec, const SpherePoint& base, int depth, double tol_t, int k_avg,
                       const TreeOptions& opts)
{
    return bowen_root(PressureEstimator(spec, base, depth, k_avg, opts), tol_t);
}

namespace {

constexpr double kGridMatch = 1e-12;

std::ptrdiff_t grid_index(const std::vector<double>& grid, double t)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - t) <= kGridMatch * std::max(1.0, std::abs(t))) {
            return static_cast<std::ptrdiff_t>(i);
        }
    }
    return -1;
}

} // namespace

double lyapunov_from_slope(const PressureCurve& curve, double t)
{
    const auto& g = curve.t_grid;
    const auto& p = curve.estimates;
    if (g.size() < 2) {
        throw GridTooCoarse("slope needs at least two grid points");
    }
    const auto i = grid_index(g, t);
    if (i >= 0) {
        const auto k = static_cast<std::size_t>(i);
        if (k == 0 || k + 1 >= g.size()) {
            throw GridTooCoarse(fmt::format("t = {:.6g} has no neighbor on both sides", t));
        }
        return -(p[k + 1] - p[k - 1]) / (g[k + 1] - g[k - 1]);
    }
    for (std::size_t k = 1; k < g.size(); ++k) {
        if (g[k - 1] < t && t < g[k]) {
            return -(p[k] - p[k - 1]) / (g[k] - g[k - 1]);
        }
    }
    throw GridTooCoarse(fmt::format("t = {:.6g} is outside the grid", t));
}

VarianceEstimate variance_from_curvature(const PressureCurve& curve, double t, double tau_conv)
{
    const auto& g = curve.t_grid;
    const auto i = grid_index(g, t);
    if (i <= 0 || static_cast<std::size_t>(i) + 1 >= g.size()) {
        throw GridTooCoarse(fmt::format("t = {:.6g} needs grid neighbors on both sides", t));
    }
    const auto k = static_cast<std::size_t>(i);
    const double h1 = g[k] - g[k - 1];
    const double h2 = g[k + 1] - g[k];
    if (std::abs(h1 - h2) > 1e-9 * std::max(h1, h2)) {
        throw GridTooCoarse("curvature needs uniform spacing around t");
    }
    const auto& p = curve.estimates;
    VarianceEstimate out;
    out.second_difference = p[k + 1] - 2.0 * p[k] + p[k - 1];
    out.value = out.second_difference / (h1 * h2);
    if (out.second_difference < 0.0 && out.second_difference >= -tau_conv) {
        out.value = 0.0;
        out.clamped = true;
    }
    return out;
}

void write_csv(std::ostream& os, const PressureCurve& curve)
{
    fmt::print(os, "# depth={} k_avg={} cross_check_gap={:.17g}\n", curve.depth, curve.k_avg, curve.cross_check_gap);
    for (const auto& v : curve.violations) {
        fmt::print(os, "# violation: {}\n", v);
    }
    fmt::print(os, "t,pressure,increment_spread,depth\n");
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        fmt::print(os, "{:.17g},{:.17g},{:.17g},{}\n", curve.t_grid[i], curve.estimates[i], curve.increment_spreads[i],
                   curve.depth);
    }
}

void write_csv(std::ostream& os, const BowenResult& r)
{
    fmt::print(os, "h,bracket_lo,bracket_hi,residual,depth\n");
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.h, r.lo, r.hi, r.residual, r.depth);
}

} // namespace semithermo
