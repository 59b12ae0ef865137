#pragma once

#include "semithermo/semigroup.hpp"

#include <iosfwd>
#include <vector>

namespace semithermo {

inline constexpr int kShrinkBoundarySamples = 32;

struct ShrinkFit {
    /// Fitted rate in diam ~ c_hat * exp(-alpha_hat * k).
    double alpha_hat = 0.0;
    double c_hat = 0.0;
    double r2 = 0.0;
    /// Largest chordal diameter of a level-k pullback of the ball, k = 0..n_max.
    std::vector<double> max_diameter;
};

/// Pulls the circle |z - xi| = r back along every branch of the preimage tree
/// and fits log(max diameter) against depth. Throws ScaleRangeSaturated for
/// n_max < 2 and PreconditionError when the ball is within 4r of a
/// postcritical sample.
ShrinkFit shrink_rate(const SemigroupSpec& spec, cplx xi, double radius, int n_max);

void write_csv(std::ostream& os, const ShrinkFit& fit);

} // namespace semithermo
