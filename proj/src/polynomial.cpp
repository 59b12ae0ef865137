#include "semithermo/polynomial.hpp"
#include "semithermo/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace semithermo {

double chordal_distance(const SpherePoint& a, const SpherePoint& b)
{
    if (a.is_infinite() && b.is_infinite()) {
        return 0.0;
    }
    if (a.is_infinite()) {
        return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
    }
    if (b.is_infinite()) {
        return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
    }
    const cplx z = a.value();
    const cplx w = b.value();
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

cplx horner(std::span<const cplx> c, cplx z)
{
    cplx p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        p = p * z + *it;
    }
    return p;
}

void horner_with_derivative(std::span<const cplx> c, cplx z, cplx& p, cplx& dp)
{
    p = 0.0;
    dp = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
}

double abs_horner(std::span<const cplx> c, double r)
{
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        s = s * r + std::abs(*it);
    }
    return s;
}

Coeffs derivative(std::span<const cplx> c)
{
    if (c.size() <= 1) {
        return {cplx(0.0)};
    }
    Coeffs d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) {
        d[k - 1] = c[k] * static_cast<double>(k);
    }
    return d;
}

Coeffs multiply(std::span<const cplx> a, std::span<const cplx> b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    Coeffs r(a.size() + b.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

Coeffs add(std::span<const cplx> a, std::span<const cplx> b)
{
    Coeffs r(std::max(a.size(), b.size()), cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] += b[i];
    }
    return r;
}

Coeffs scaled(std::span<const cplx> a, cplx s)
{
    Coeffs r(a.begin(), a.end());
    for (auto& x : r) {
        x *= s;
    }
    return r;
}

double max_abs(std::span<const cplx> c)
{
    double m = 0.0;
    for (const auto& x : c) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

int effective_degree(std::span<const cplx> c, double eps_rel)
{
    const double cut = eps_rel * max_abs(c);
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        const double a = std::abs(c[static_cast<std::size_t>(k)]);
        if (a > cut && a > 0.0) {
            return k;
        }
    }
    return -1;
}

Coeffs trimmed(std::span<const cplx> c, double eps_rel)
{
    const int d = effective_degree(c, eps_rel);
    if (d < 0) {
        return {cplx(0.0)};
    }
    return Coeffs(c.begin(), c.begin() + d + 1);
}

} // namespace semithermo
