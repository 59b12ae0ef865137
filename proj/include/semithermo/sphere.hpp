#pragma once

#include <complex>

namespace semithermo {

using cplx = std::complex<double>;

/// A point of the Riemann sphere. Infinity is an explicit flag, never a
/// large-magnitude sentinel.
class SpherePoint {
public:
    constexpr SpherePoint() = default;
    constexpr SpherePoint(cplx z) : z_(z) {}
    constexpr SpherePoint(double re, double im = 0.0) : z_(re, im) {}

    static constexpr SpherePoint infinity()
    {
        SpherePoint p;
        p.infinite_ = true;
        return p;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    /// Finite coordinate. Meaningless (zero) for the point at infinity.
    constexpr cplx value() const { return z_; }

    friend constexpr bool operator==(const SpherePoint& a, const SpherePoint& b)
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.z_ == b.z_);
    }

private:
    cplx z_{};
    bool infinite_ = false;
};

/// Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)); bounded by 2.
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

} // namespace semithermo
