#pragma once

#include "semithermo/polynomial.hpp"
#include "semithermo/roots.hpp"
#include "semithermo/sphere.hpp"

#include <vector>

namespace semithermo {

inline constexpr double kEpsLead = 1e-12;
/// Minimum chordal gap between numerator and denominator roots.
inline constexpr double kCommonRootGap = 1e-6;

/// A non-constant rational map N/D on the Riemann sphere.
///
/// Coefficients are stored trimmed; degree() is max(deg N, deg D). The
/// reversed (chart at infinity) coefficients are cached so evaluation and
/// derivatives switch to u = 1/z for |z| > 1.
class RationalMap {
public:
    /// Validating constructor. Throws ValidationError for a constant map or
    /// when numerator and denominator share a root.
    RationalMap(Coeffs numerator, Coeffs denominator = {cplx(1.0)});

    static RationalMap polynomial(Coeffs coeffs) { return RationalMap(std::move(coeffs)); }

    /// Skips the common-root test. For maps that are coprime by
    /// construction, e.g. compositions of validated maps.
    static RationalMap unchecked(Coeffs numerator, Coeffs denominator);

    int degree() const { return degree_; }
    bool is_polynomial() const { return denominator_.size() == 1; }
    const Coeffs& numerator() const { return numerator_; }
    const Coeffs& denominator() const { return denominator_; }

    /// Numerator and denominator padded to degree()+1 coefficients.
    const Coeffs& padded_numerator() const { return num_pad_; }
    const Coeffs& padded_denominator() const { return den_pad_; }
    /// Same, reversed: the map written in the chart u = 1/z.
    const Coeffs& reversed_numerator() const { return num_rev_; }
    const Coeffs& reversed_denominator() const { return den_rev_; }

private:
    struct Unchecked {};
    RationalMap(Coeffs numerator, Coeffs denominator, Unchecked);

    Coeffs numerator_;
    Coeffs denominator_;
    Coeffs num_pad_, den_pad_, num_rev_, den_rev_;
    int degree_ = 0;
};

struct PreimageSet {
    std::vector<Root> roots;
    /// max chordal |f(root) - w|
    double residual = 0.0;

    int total_multiplicity() const;
};

struct CriticalPoint {
    SpherePoint point;
    int multiplicity = 1;
};

SpherePoint evaluate(const RationalMap& f, const SpherePoint& z);

/// |f'(z)| (1+|z|^2) / (1+|f(z)|^2), continuous through poles and infinity.
double spherical_derivative(const RationalMap& f, const SpherePoint& z);

/// All solutions of f(z) = w with multiplicity. Solutions at infinity appear
/// when the equation polynomial drops degree. Throws DegenerateEquation when
/// the equation polynomial vanishes identically, NonConvergence from the
/// root finder.
PreimageSet preimages(const RationalMap& f, const SpherePoint& w, const RootOptions& opts = {});

/// Zeros of N'D - ND' plus infinity; total multiplicity 2d - 2.
std::vector<CriticalPoint> critical_points(const RationalMap& f, const RootOptions& opts = {});

/// f after g, i.e. z -> f(g(z)).
RationalMap compose(const RationalMap& f, const RationalMap& g);

} // namespace semithermo
