#pragma once

#include <Eigen/Eigenvalues>

#include <complex>
#include <vector>

namespace oracle {

/// Roots as eigenvalues of the companion matrix (ascending coefficients,
/// nonzero leading term). Independent of the library's root finder.
inline std::vector<std::complex<double>> companion_roots(const std::vector<std::complex<double>>& c)
{
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        m(i, i - 1) = 1.0;
    }
    for (int i = 0; i < n; ++i) {
        m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(n)];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(es.eigenvalues()(i));
    }
    return out;
}

/// Greedy pairing; returns the largest distance between paired roots, or
/// infinity when the sizes differ.
inline double match_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b)
{
    if (a.size() != b.size()) {
        return 1e300;
    }
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < b.size(); ++j) {
            if (std::abs(b[j] - x) < std::abs(b[best] - x)) {
                best = j;
            }
        }
        worst = std::max(worst, std::abs(b[best] - x));
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

} // namespace oracle
