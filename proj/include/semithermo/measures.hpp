#pragma once

#include "semithermo/image.hpp"
#include "semithermo/preimage_tree.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace semithermo {

struct Atom {
    Word word;
    SpherePoint point;
    double weight = 0.0;
    int level = 0;
    /// Index into AtomMeasure::atoms of the image f_{word[0]}(point); -1 on level 1.
    std::int64_t parent = -1;
    double log_sderiv = 0.0;
};

/// Finite-depth atomic approximation of nu_{t,s}: atom x on level n gets
/// weight proportional to exp(-s n) |(f^n)'(x)|^{-t}, n = 1..n_max.
struct AtomMeasure {
    std::vector<Atom> atoms;
    double t = 0.0;
    double s = 0.0;
    SpherePoint base_point;
    int n_max = 0;
    /// log of the partial series sum standing in for SP_t(xi, s).
    double log_normalizer = 0.0;
    /// Pressure estimate from the same tree, and its increment spread.
    double pressure = 0.0;
    double pressure_spread = 0.0;
    /// Normalized mass of each level 1..n_max (index 0 unused).
    std::vector<double> level_mass;
    /// Mass the untruncated series would add beyond n_max, relative to the
    /// total kept mass.
    double tail_bound = 0.0;

    double total_mass() const;
};

/// Throws SeriesNotSummable when s <= P(t) + max(spread, 1e-9), with P(t)
/// estimated from the last levels of the same tree.
AtomMeasure conformal_atoms(const SemigroupSpec& spec, const SpherePoint& base, double t, double s, int n_max,
                            const TreeOptions& opts = {});

/// Largest relative defect of w(x) e^s |f_i'(x)|^t = w(f_i(x)) over atoms
/// above level 1, with the derivative recomputed from the generator. Also
/// checks that f_i(x) lands on the parent atom.
double quasi_invariance_defect(const SemigroupSpec& spec, const AtomMeasure& measure);

void write_csv(std::ostream& os, const AtomMeasure& measure);
void write_report(std::ostream& os, const AtomMeasure& measure, double quasi_defect);

/// Backward orbit: points[k+1] is a preimage of points[k] under
/// generators[symbols[k]].
struct OrbitSample {
    std::vector<SpherePoint> points;
    std::vector<std::uint8_t> symbols;
    /// log probability of the branch chosen at each step.
    std::vector<double> log_weights;
    /// log spherical derivative of the chosen generator at the new point.
    std::vector<double> log_sderiv;
    std::uint64_t seed = 0;
};

/// Each step picks among all one-step preimages (every generator, every
/// root) with probability proportional to |f_i'(x)|^{-t} (spherical).
OrbitSample sample_backward_orbit(const SemigroupSpec& spec, const SpherePoint& start, double t, int length,
                                  std::uint64_t seed);

struct CltReport {
    double t = 0.0;
    int n_block = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    /// Mean per-step value of the block sum of log spherical derivatives.
    double mean = 0.0;
    /// Var(S_n) / n.
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    /// (Var(S_n)/n) / (Var(S_{n/2})/(n/2)) - 1.
    double variance_ratio = 0.0;
    /// Set when Var(S_n)/n < 1e-12: the observable is cohomologous to a
    /// constant along the sampled orbits. Higher moments are then 0.
    bool degenerate = false;
};

inline constexpr int kOrbitBurnIn = 20;

/// Independent backward orbits from the repelling seed, one derived RNG
/// stream per orbit (SplitMix64::split(seed, i)). OpenMP over orbits.
CltReport birkhoff_diagnostics(const SemigroupSpec& spec, double t, int n_block, std::uint64_t n_samples,
                               std::uint64_t seed);

void write_report(std::ostream& os, const CltReport& report);

struct TransferCheck {
    /// Mean over the grid of log L^n 1(xi) - log L^{n-1} 1(xi).
    double value = 0.0;
    /// max - min of the per-point growth rates.
    double spread = 0.0;
    std::vector<double> per_point;
};

/// Applies L_t to the constant 1 n_power times at each grid point.
TransferCheck transfer_operator_check(const SemigroupSpec& spec, std::span<const SpherePoint> grid, double t,
                                      int n_power, const TreeOptions& opts = {});

/// Up to `count` occupied pixel centers of a render, evenly spaced in scan
/// order, keeping only points farther than min_pcv (chordal) from the
/// postcritical samples.
std::vector<SpherePoint> grid_from_render(const SemigroupSpec& spec, const GridImage& image, std::size_t count,
                                          double min_pcv = 1e-3);

} // namespace semithermo
