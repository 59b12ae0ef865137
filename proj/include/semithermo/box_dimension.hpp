#pragma once

#include "semithermo/image.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace semithermo {

/// Dyadic scales eps = 2^-k, k in [k_min, k_max], relative to the frame side.
struct KRange {
    int k_min = 2;
    int k_max = 9;
};

struct BoxFit {
    double slope = 0.0;
    double r2 = 0.0;
    std::vector<int> ks;
    std::vector<double> counts;
    /// True when the two finest scales were dropped for pixel saturation.
    bool dropped_finest = false;
};

/// Least-squares slope of log N(eps) against log(1/eps) for the occupied
/// pixels. Throws ScaleRangeSaturated with fewer than four usable scales or
/// when the count stalls between consecutive scales.
BoxFit box_dimension(const GridImage& image, KRange range);

/// Same for a point cloud; boxes tile the square frame anchored at
/// (frame.re_min, frame.im_min) with side max(width, height).
BoxFit box_dimension(std::span<const cplx> points, const BBox& frame, KRange range);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

void write_csv(std::ostream& os, const BoxFit& fit);

} // namespace semithermo
