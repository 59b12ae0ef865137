#include "semithermo/errors.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/pressure.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace semithermo {

namespace {

double log_add(double a, double b)
{
    if (a < b) {
        std::swap(a, b);
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    return a + std::log1p(std::exp(b - a));
}

} // namespace

double AtomMeasure::total_mass() const
{
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& a : atoms) {
        const double y = a.weight - comp;
        const double s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
    }
    return sum;
}

AtomMeasure conformal_atoms(const SemigroupSpec& spec, const SpherePoint& base, double t, double s, int n_max,
                            const TreeOptions& opts)
{
    if (n_max < 1) {
        throw PreconditionError("conformal_atoms needs n_max >= 1");
    }
    const PreimageTree tree = enumerate_tree(spec, base, n_max, opts);

    std::vector<double> level_sum(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int k = 1; k <= n_max; ++k) {
        level_sum[static_cast<std::size_t>(k)] = tree_weight_sum(tree, t, k);
    }
    const int first = std::max(1, n_max - kDefaultKAvg + 1);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double acc = 0.0;
    for (int k = first; k <= n_max; ++k) {
        const double inc = level_sum[static_cast<std::size_t>(k)] - level_sum[static_cast<std::size_t>(k - 1)];
        acc += inc;
        lo = std::min(lo, inc);
        hi = std::max(hi, inc);
    }

    AtomMeasure m;
    m.t = t;
    m.s = s;
    m.base_point = base;
    m.n_max = n_max;
    m.pressure = acc / (n_max - first + 1);
    m.pressure_spread = std::max(hi - lo, kSpreadFloor);
    const double margin = std::max(m.pressure_spread, 1e-9);
    if (!(s > m.pressure + margin)) {
        throw SeriesNotSummable(fmt::format("s = {:.6g} does not exceed P(t) = {:.6g} by the margin {:.3g}", s,
                                            m.pressure, margin));
    }

    double log_z = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n_max; ++k) {
        log_z = log_add(log_z, -s * k + level_sum[static_cast<std::size_t>(k)]);
    }
    m.log_normalizer = log_z;

    std::vector<std::size_t> offset(static_cast<std::size_t>(n_max) + 1, 0);
    m.level_mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int k = 1; k <= n_max; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        offset[uk] = m.atoms.size();
        for (const auto& node : tree.level(k)) {
            Atom a;
            a.word = node.word;
            a.point = node.point;
            a.level = k;
            a.log_sderiv = node.log_sderiv;
            a.weight = std::exp(-s * k - t * node.log_sderiv - log_z);
            a.parent = k == 1 ? -1 : static_cast<std::int64_t>(offset[uk - 1] + node.parent);
            m.level_mass[uk] += a.weight;
            m.atoms.push_back(std::move(a));
        }
    }
    // Absorb the last few ulps so the masses sum to one at double precision.
    const double total = m.total_mass();
    for (auto& a : m.atoms) {
        a.weight /= total;
    }
    for (auto& lm : m.level_mass) {
        lm /= total;
    }

    const double r = std::exp(m.pressure - s);
    m.tail_bound = m.level_mass.back() * r / (1.0 - r);
    return m;
}

double quasi_invariance_defect(const SemigroupSpec& spec, const AtomMeasure& m)
{
    double worst = 0.0;
    for (const auto& a : m.atoms) {
        if (a.parent < 0) {
            continue;
        }
        const Atom& p = m.atoms[static_cast<std::size_t>(a.parent)];
        const RationalMap& g = spec.generators[a.word.symbols.front()];
        const double sd = spherical_derivative(g, a.point);
        const double pushed = a.weight * std::exp(m.s) * std::pow(sd, m.t);
        worst = std::max(worst, std::abs(pushed / p.weight - 1.0));
        worst = std::max(worst, chordal_distance(evaluate(g, a.point), p.point));
    }
    return worst;
}

void write_csv(std::ostream& os, const AtomMeasure& m)
{
    fmt::print(os, "# t={:.17g}\n# s={:.17g}\n# n_max={}\n", m.t, m.s, m.n_max);
    os << "word,re,im,weight\n";
    for (const auto& a : m.atoms) {
        const double re = a.point.is_finite() ? a.point.value().real() : std::numeric_limits<double>::infinity();
        const double im = a.point.is_finite() ? a.point.value().imag() : 0.0;
        fmt::print(os, "{},{:.17g},{:.17g},{:.17g}\n", a.word.to_string(), re, im, a.weight);
    }
}

void write_report(std::ostream& os, const AtomMeasure& m, double quasi_defect)
{
    fmt::print(os, "t={:.17g}\n", m.t);
    fmt::print(os, "s={:.17g}\n", m.s);
    fmt::print(os, "n_max={}\n", m.n_max);
    fmt::print(os, "atoms={}\n", m.atoms.size());
    fmt::print(os, "total_mass={:.17g}\n", m.total_mass());
    fmt::print(os, "log_normalizer={:.17g}\n", m.log_normalizer);
    fmt::print(os, "pressure={:.17g}\n", m.pressure);
    fmt::print(os, "pressure_spread={:.17g}\n", m.pressure_spread);
    fmt::print(os, "tail_bound={:.17g}\n", m.tail_bound);
    fmt::print(os, "quasi_invariance_defect={:.17g}\n", quasi_defect);
    for (std::size_t k = 1; k < m.level_mass.size(); ++k) {
        fmt::print(os, "level_mass_{}={:.17g}\n", k, m.level_mass[k]);
    }
}

} // namespace semithermo
