#include "semithermo/errors.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/pressure.hpp"

#include <algorithm>
#include <limits>

namespace semithermo {

TransferCheck transfer_operator_check(const SemigroupSpec& spec, std::span<const SpherePoint> grid, double t,
                                      int n_power, const TreeOptions& opts)
{
    if (grid.empty()) {
        throw PreconditionError("transfer_operator_check needs a non-empty grid");
    }
    if (n_power < 1) {
        throw PreconditionError("transfer_operator_check needs n_power >= 1");
    }
    TransferCheck out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double acc = 0.0;
    for (const auto& xi : grid) {
        const LevelProfile prof = build_profile(spec, xi, n_power, n_power - 1, opts);
        const double growth = tree_weight_sum(prof, t, n_power) - tree_weight_sum(prof, t, n_power - 1);
        out.per_point.push_back(growth);
        acc += growth;
        lo = std::min(lo, growth);
        hi = std::max(hi, growth);
    }
    out.value = acc / static_cast<double>(grid.size());
    out.spread = std::max(hi - lo, kSpreadFloor);
    return out;
}

std::vector<SpherePoint> grid_from_render(const SemigroupSpec& spec, const GridImage& image, std::size_t count,
                                          double min_pcv)
{
    std::vector<SpherePoint> ok;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            if (image.occupied(x, y)) {
                const SpherePoint p(image.center(x, y));
                if (spec.pcv_distance(p) > min_pcv) {
                    ok.push_back(p);
                }
            }
        }
    }
    if (ok.size() <= count) {
        return ok;
    }
    std::vector<SpherePoint> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        out.push_back(ok[j * ok.size() / count]);
    }
    return out;
}

} // namespace semithermo
