#include "semithermo/spectrum.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace semithermo {

TemperatureResult temperature(const PressureEstimator& pressure, double t, double q, double tol_t)
{
    if (t < 0.0 || q < 0.0 || q > 1.0) {
        throw PreconditionError(fmt::format("temperature needs t >= 0 and q in [0, 1] (t = {}, q = {})", t, q));
    }
    const double target = q * pressure(t);
    auto g = [&](double T) { return pressure(T + q * t) - target; };

    TemperatureResult r;
    if (!(g(0.0) > 0.0)) {
        r.value = 0.0;
        r.residual = std::abs(g(0.0));
        return r;
    }
    // Same bracketing as the Bowen root, so q = 0 reproduces it exactly.
    double lo = 0.0;
    double hi = 2.0;
    while (g(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) {
            throw NoSignChange("temperature equation keeps its sign up to T = 64");
        }
    }
    while (hi - lo > tol_t) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double g_lo = g(lo);
    const double g_hi = g(hi);
    r.value = g_lo > g_hi ? std::clamp(lo + (hi - lo) * g_lo / (g_lo - g_hi), lo, hi) : 0.5 * (lo + hi);
    r.residual = std::abs(g(r.value));
    return r;
}

double temperature(const SemigroupSpec& spec, const SpherePoint& base, double t, double q, int depth, double tol_t)
{
    return temperature(PressureEstimator(spec, base, depth), t, q, tol_t).value;
}

double lyapunov_at(const PressureEstimator& pressure, double s)
{
    const double lo = std::max(0.0, s - kChiStep);
    const double hi = lo + 2.0 * kChiStep;
    return -(pressure(hi) - pressure(lo)) / (hi - lo);
}

SpectrumRow spectrum_row(const PressureEstimator& pressure, double t, double q, double tol_t)
{
    SpectrumRow row;
    row.q = q;
    const auto temp = temperature(pressure, t, q, tol_t);
    row.temperature = temp.value;
    row.residual = temp.residual;
    row.chi = lyapunov_at(pressure, temp.value + q * t);
    row.alpha = t + pressure(t) / row.chi;
    row.dim = row.temperature + q * row.alpha;
    return row;
}

SpectrumTable spectrum_table(const PressureEstimator& pressure, double t, const std::vector<double>& q_grid,
                             double tol_t)
{
    const bool has0 = std::find(q_grid.begin(), q_grid.end(), 0.0) != q_grid.end();
    const bool has1 = std::find(q_grid.begin(), q_grid.end(), 1.0) != q_grid.end();
    if (!has0 || !has1) {
        throw PreconditionError("q grid must contain both 0 and 1");
    }
    for (double q : q_grid) {
        if (q < 0.0 || q > 1.0) {
            throw PreconditionError(fmt::format("q = {} outside [0, 1]", q));
        }
    }

    SpectrumTable table;
    table.t = t;
    table.depth = pressure.depth();
    table.tol_t = tol_t;
    table.h_ref = bowen_root(pressure, tol_t).h;
    table.rows.resize(q_grid.size());

    const auto n = static_cast<std::ptrdiff_t>(q_grid.size());
    std::vector<std::exception_ptr> errors(q_grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            table.rows[k] = spectrum_row(pressure, t, q_grid[k], tol_t);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    double chi_min = INFINITY;
    double chi_max = -INFINITY;
    for (const auto& row : table.rows) {
        chi_min = std::min(chi_min, row.chi);
        chi_max = std::max(chi_max, row.chi);
        if (!(row.chi > 0.0)) {
            table.violations.push_back(fmt::format("chi = {:.6g} is not positive at q = {}", row.chi, row.q));
        }
        if (row.dim < 0.0 || row.dim > 2.0) {
            table.violations.push_back(fmt::format("dim = {:.6g} outside [0, 2] at q = {}", row.dim, row.q));
        }
        if (row.q == 0.0 && std::abs(row.temperature - table.h_ref) > 2.0 * tol_t) {
            table.violations.push_back(fmt::format("T(0) = {:.6g} differs from h = {:.6g}", row.temperature, table.h_ref));
        }
        if (row.q == 1.0 && std::abs(row.temperature) > 2.0 * tol_t) {
            table.violations.push_back(fmt::format("T(1) = {:.6g} is not 0", row.temperature));
        }
    }
    table.chi_spread = chi_max - chi_min;
    table.degenerate = table.chi_spread < kDegenerateChiSpread;
    return table;
}

SpectrumTable spectrum_table(const SemigroupSpec& spec, const SpherePoint& base, double t,
                             const std::vector<double>& q_grid, int depth, double tol_t)
{
    return spectrum_table(PressureEstimator(spec, base, depth), t, q_grid, tol_t);
}

double hd_of_measure(const PressureEstimator& pressure, double t)
{
    return t + pressure(t) / lyapunov_at(pressure, t);
}

double max_curvature(const PressureEstimator& pressure, const std::vector<double>& t_grid)
{
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < t_grid.size(); ++i) {
        const double d2 = pressure(t_grid[i + 1]) - 2.0 * pressure(t_grid[i]) + pressure(t_grid[i - 1]);
        worst = std::max(worst, std::abs(d2));
    }
    return worst;
}

void write_csv(std::ostream& os, const SpectrumTable& table, std::uint64_t seed)
{
    fmt::print(os, "# t={:.17g}\n# n={}\n# h_ref={:.17g}\n# seed={}\n", table.t, table.depth, table.h_ref, seed);
    fmt::print(os, "# chi_spread={:.17g}\n# degenerate={}\n", table.chi_spread, table.degenerate ? "true" : "false");
    for (const auto& v : table.violations) {
        fmt::print(os, "# violation: {}\n", v);
    }
    fmt::print(os, "q,T,chi,alpha,dim\n");
    for (const auto& r : table.rows) {
        fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.q, r.temperature, r.chi, r.alpha, r.dim);
    }
}

} // namespace semithermo
