#include "semithermo/box_dimension.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>

namespace semithermo {

LineFit least_squares(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

namespace {

/// Counts distinct boxes among integer cells (x, y) at resolution 2^k.
std::size_t count_boxes(std::vector<std::uint64_t>& keys)
{
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

BoxFit fit_counts(std::vector<int> ks, std::vector<double> counts)
{
    BoxFit fit;
    if (ks.size() >= 2) {
        const double last = counts.back();
        const double prev = counts[counts.size() - 2];
        if (last < 1.05 * prev) {
            ks.resize(ks.size() - 2);
            counts.resize(counts.size() - 2);
            fit.dropped_finest = true;
        }
    }
    if (ks.size() < 4) {
        throw ScaleRangeSaturated(fmt::format("only {} usable dyadic scales (need 4)", ks.size()));
    }
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (!(counts[i] > counts[i - 1])) {
            throw ScaleRangeSaturated(fmt::format("box count stalls between k = {} and k = {}", ks[i - 1], ks[i]));
        }
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        x.push_back(ks[i] * std::log(2.0));
        y.push_back(std::log(counts[i]));
    }
    const LineFit lf = least_squares(x, y);
    fit.slope = lf.slope;
    fit.r2 = lf.r2;
    fit.ks = std::move(ks);
    fit.counts = std::move(counts);
    return fit;
}

void check_range(KRange range)
{
    if (range.k_min < 0 || range.k_max > 30 || range.k_max - range.k_min + 1 < 4) {
        throw ScaleRangeSaturated(fmt::format("k range [{}, {}] has fewer than four scales", range.k_min, range.k_max));
    }
}

} // namespace

BoxFit box_dimension(const GridImage& image, KRange range)
{
    check_range(range);
    const double side = std::max(image.width(), image.height());
    std::vector<int> ks;
    std::vector<double> counts;
    std::vector<std::uint64_t> keys;
    for (int k = range.k_min; k <= range.k_max; ++k) {
        const double box = side / std::ldexp(1.0, k);
        if (box < 1.0) {
            break;
        }
        keys.clear();
        for (int y = 0; y < image.height(); ++y) {
            for (int x = 0; x < image.width(); ++x) {
                if (image.occupied(x, y)) {
                    const auto bx = static_cast<std::uint64_t>(x / box);
                    const auto by = static_cast<std::uint64_t>(y / box);
                    keys.push_back((by << 32) | bx);
                }
            }
        }
        ks.push_back(k);
        counts.push_back(static_cast<double>(count_boxes(keys)));
    }
    return fit_counts(std::move(ks), std::move(counts));
}

BoxFit box_dimension(std::span<const cplx> points, const BBox& frame, KRange range)
{
    check_range(range);
    const double side = std::max(frame.width(), frame.height());
    if (!(side > 0.0)) {
        throw PreconditionError("degenerate frame");
    }
    std::vector<int> ks;
    std::vector<double> counts;
    std::vector<std::uint64_t> keys;
    for (int k = range.k_min; k <= range.k_max; ++k) {
        const double cells = std::ldexp(1.0, k);
        keys.clear();
        for (const auto& z : points) {
            const double fx = (z.real() - frame.re_min) / side * cells;
            const double fy = (z.imag() - frame.im_min) / side * cells;
            if (fx < 0.0 || fy < 0.0 || fx >= cells || fy >= cells) {
                continue;
            }
            keys.push_back((static_cast<std::uint64_t>(fy) << 32) | static_cast<std::uint64_t>(fx));
        }
        ks.push_back(k);
        counts.push_back(static_cast<double>(count_boxes(keys)));
    }
    return fit_counts(std::move(ks), std::move(counts));
}

void write_csv(std::ostream& os, const BoxFit& fit)
{
    fmt::print(os, "# slope={:.17g}\n# r2={:.17g}\n# dropped_finest={}\n", fit.slope, fit.r2,
               fit.dropped_finest ? "true" : "false");
    fmt::print(os, "k,log_inv_eps,log_count\n");
    for (std::size_t i = 0; i < fit.ks.size(); ++i) {
        fmt::print(os, "{},{:.17g},{:.17g}\n", fit.ks[i], fit.ks[i] * std::log(2.0), std::log(fit.counts[i]));
    }
}

} // namespace semithermo
