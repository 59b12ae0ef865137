#pragma once

#include "semithermo/semigroup.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace semithermo {

struct Disc {
    cplx center{0.0, 0.0};
    double radius = 1.0;
};

/// Boundary preimages of different generators closer than this are reported
/// as closure touch points.
inline constexpr double kTouchDistance = 1e-4;

struct OscReport {
    /// min over preimages of interior samples of radius - |p - center|, also
    /// pulled below zero if a boundary preimage leaves the closed disc.
    double containment_margin = 0.0;
    /// min over i != j and p in f_i^{-1}(interior samples) of
    /// |f_j(p) - center| - radius. Negative means f_i^{-1}(U) meets
    /// f_j^{-1}(U). +infinity for a single generator.
    double disjointness_margin = 0.0;
    /// Unsigned minimum distance between the preimage clouds of different
    /// generators (interior and boundary samples).
    double cloud_separation = 0.0;
    std::vector<cplx> closure_touch_points;
    /// The boundary-density condition holds for every round disc and is not
    /// sampled.
    bool density_condition_by_shape = true;
    bool pass = false;
};

/// Samples U (n_boundary equally spaced boundary points starting at angle 0,
/// plus n_interior seeded uniform interior points) and tests
/// f_1^{-1}(U) u ... u f_u^{-1}(U) c U and pairwise disjointness.
OscReport osc_check(const SemigroupSpec& spec, const Disc& disc, int n_boundary, int n_interior, std::uint64_t seed);

void write_report(std::ostream& os, const OscReport& report);

} // namespace semithermo
