#include "semithermo/rational_map.hpp"
#include "semithermo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace semithermo {

namespace {

Coeffs padded(const Coeffs& c, int degree)
{
    Coeffs p(c);
    p.resize(static_cast<std::size_t>(degree) + 1, cplx(0.0));
    return p;
}

Coeffs reversed(const Coeffs& c)
{
    return Coeffs(c.rbegin(), c.rend());
}

/// Picks the chart in which |coordinate| <= 1.
struct Chart {
    const Coeffs* num;
    const Coeffs* den;
    cplx x;
};

Chart chart_for(const RationalMap& f, const SpherePoint& z)
{
    if (z.is_infinite()) {
        return {&f.reversed_numerator(), &f.reversed_denominator(), cplx(0.0)};
    }
    const cplx v = z.value();
    if (std::abs(v) <= 1.0) {
        return {&f.padded_numerator(), &f.padded_denominator(), v};
    }
    return {&f.reversed_numerator(), &f.reversed_denominator(), 1.0 / v};
}

} // namespace

RationalMap::RationalMap(Coeffs numerator, Coeffs denominator)
    : RationalMap(std::move(numerator), std::move(denominator), Unchecked{})
{
    if (effective_degree(numerator_, kEpsLead) >= 1 && effective_degree(denominator_, kEpsLead) >= 1) {
        const auto num_roots = polynomial_roots(numerator_);
        const auto den_roots = polynomial_roots(denominator_);
        for (const auto& a : num_roots) {
            for (const auto& b : den_roots) {
                if (chordal_distance(a, b) < kCommonRootGap) {
                    throw ValidationError("numerator and denominator share a common factor");
                }
            }
        }
    }
}

RationalMap RationalMap::unchecked(Coeffs numerator, Coeffs denominator)
{
    return RationalMap(std::move(numerator), std::move(denominator), Unchecked{});
}

RationalMap::RationalMap(Coeffs numerator, Coeffs denominator, Unchecked)
{
    if (numerator.empty() || effective_degree(numerator, kEpsLead) < 0) {
        throw ValidationError("numerator is identically zero (constant map)");
    }
    if (denominator.empty() || effective_degree(denominator, kEpsLead) < 0) {
        throw ValidationError("denominator is identically zero");
    }
    for (const auto& c : numerator) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("non-finite coefficient");
        }
    }
    for (const auto& c : denominator) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("non-finite coefficient");
        }
    }
    numerator_ = trimmed(numerator, kEpsLead);
    denominator_ = trimmed(denominator, kEpsLead);
    degree_ = static_cast<int>(std::max(numerator_.size(), denominator_.size())) - 1;
    if (degree_ < 1) {
        throw ValidationError("map is constant (degree 0)");
    }
    num_pad_ = padded(numerator_, degree_);
    den_pad_ = padded(denominator_, degree_);
    num_rev_ = reversed(num_pad_);
    den_rev_ = reversed(den_pad_);
}

int PreimageSet::total_multiplicity() const
{
    int s = 0;
    for (const auto& r : roots) {
        s += r.multiplicity;
    }
    return s;
}

SpherePoint evaluate(const RationalMap& f, const SpherePoint& z)
{
    const Chart ch = chart_for(f, z);
    const cplx n = horner(*ch.num, ch.x);
    const cplx d = horner(*ch.den, ch.x);
    if (d == cplx(0.0)) {
        return SpherePoint::infinity();
    }
    const cplx v = n / d;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        return SpherePoint::infinity();
    }
    return SpherePoint(v);
}

double spherical_derivative(const RationalMap& f, const SpherePoint& z)
{
    // |N'D - ND'| (1+|x|^2) / (|N|^2 + |D|^2) is chart independent, since
    // z -> 1/z is an isometry of the chordal metric.
    const Chart ch = chart_for(f, z);
    cplx n, dn, d, dd;
    horner_with_derivative(*ch.num, ch.x, n, dn);
    horner_with_derivative(*ch.den, ch.x, d, dd);
    const double den = std::norm(n) + std::norm(d);
    return std::abs(dn * d - n * dd) * (1.0 + std::norm(ch.x)) / den;
}

PreimageSet preimages(const RationalMap& f, const SpherePoint& w, const RootOptions& opts)
{
    const int d = f.degree();
    Coeffs poly;
    double ref = 0.0;
    if (w.is_infinite()) {
        poly = f.padded_denominator();
        ref = max_abs(poly);
    } else {
        const cplx wv = w.value();
        poly = f.padded_numerator();
        const auto& den = f.padded_denominator();
        for (std::size_t k = 0; k < poly.size(); ++k) {
            poly[k] -= wv * den[k];
        }
        ref = std::max(max_abs(f.padded_numerator()), std::abs(wv) * max_abs(den));
    }

    int deg = -1;
    for (int k = d; k >= 0; --k) {
        const double a = std::abs(poly[static_cast<std::size_t>(k)]);
        if (a > kEpsLead * ref && a > 0.0) {
            deg = k;
            break;
        }
    }
    if (deg < 0) {
        throw DegenerateEquation("f(z) - w vanishes identically");
    }

    PreimageSet out;
    if (deg >= 1) {
        poly.resize(static_cast<std::size_t>(deg) + 1);
        const auto raw = polynomial_roots(poly, opts);
        out.roots = cluster_roots(raw, opts.eps_cluster);
    }
    if (deg < d) {
        out.roots.push_back(Root{SpherePoint::infinity(), d - deg});
    }
    for (const auto& r : out.roots) {
        out.residual = std::max(out.residual, chordal_distance(evaluate(f, r.point), w));
    }
    return out;
}

std::vector<CriticalPoint> critical_points(const RationalMap& f, const RootOptions& opts)
{
    const Coeffs& n = f.numerator();
    const Coeffs& d = f.denominator();
    const Coeffs w = add(multiply(derivative(n), d), scaled(multiply(n, derivative(d)), -1.0));
    const Coeffs wt = trimmed(w, kEpsLead);
    const int deg_w = static_cast<int>(wt.size()) - 1;

    std::vector<CriticalPoint> out;
    if (deg_w >= 1) {
        const auto raw = polynomial_roots(wt, opts);
        for (const auto& r : cluster_roots(raw, opts.eps_cluster)) {
            out.push_back({r.point, r.multiplicity});
        }
    }
    const int at_infinity = 2 * f.degree() - 2 - std::max(deg_w, 0);
    if (at_infinity > 0) {
        out.push_back({SpherePoint::infinity(), at_infinity});
    }
    return out;
}

RationalMap compose(const RationalMap& f, const RationalMap& g)
{
    const int d = f.degree();
    const auto& a = f.padded_numerator();
    const auto& b = f.padded_denominator();
    const Coeffs& p = g.numerator();
    const Coeffs& q = g.denominator();

    std::vector<Coeffs> p_pow{{cplx(1.0)}};
    std::vector<Coeffs> q_pow{{cplx(1.0)}};
    for (int k = 1; k <= d; ++k) {
        p_pow.push_back(multiply(p_pow.back(), p));
        q_pow.push_back(multiply(q_pow.back(), q));
    }
    Coeffs num{cplx(0.0)};
    Coeffs den{cplx(0.0)};
    for (int k = 0; k <= d; ++k) {
        const auto term = multiply(p_pow[static_cast<std::size_t>(k)], q_pow[static_cast<std::size_t>(d - k)]);
        num = add(num, scaled(term, a[static_cast<std::size_t>(k)]));
        den = add(den, scaled(term, b[static_cast<std::size_t>(k)]));
    }
    return RationalMap::unchecked(std::move(num), std::move(den));
}

} // namespace semithermo
