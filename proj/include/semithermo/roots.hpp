#pragma once

#include "semithermo/polynomial.hpp"
#include "semithermo/sphere.hpp"

#include <span>
#include <vector>

namespace semithermo {

struct RootOptions {
    int max_iter = 200;
    /// Backward-error bound relative to sum |a_k| |z|^k.
    double eps_root = 1e-12;
    /// Roots closer than this are merged into one root with multiplicity.
    double eps_cluster = 1e-7;
};

/// All complex roots of the polynomial by Aberth-Ehrlich simultaneous
/// iteration. The leading coefficient must be nonzero and the degree >= 1.
/// Throws NonConvergence when some root misses the backward-error bound
/// after max_iter sweeps.
std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, const RootOptions& opts = {});

/// Closed-form roots for degree 1 or 2 (numerically stable quadratic formula).
std::vector<cplx> low_degree_roots(std::span<const cplx> coeffs);

/// Dispatches to low_degree_roots for degree <= 2 and aberth_roots otherwise.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, const RootOptions& opts = {});

struct Root {
    SpherePoint point;
    int multiplicity = 1;
};

/// Greedy clustering of nearby roots; each cluster is reported at its mean.
std::vector<Root> cluster_roots(std::span<const cplx> roots, double eps_cluster);

} // namespace semithermo
