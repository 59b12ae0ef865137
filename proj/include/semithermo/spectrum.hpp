#pragma once

#include "semithermo/pressure.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace semithermo {

/// Finite-difference step used for the Lyapunov exponent of mu_{t,q}.
inline constexpr double kChiStep = 1e-2;
/// Chi spread below this marks the exceptional (degenerate) case.
inline constexpr double kDegenerateChiSpread = 1e-3;

struct TemperatureResult {
    double value = 0.0;
    /// |P(T + q t) - q P(t)|
    double residual = 0.0;
};

/// Unique T >= 0 with P(T + q t) = q P(t), q in [0, 1], by bisection.
TemperatureResult temperature(const PressureEstimator& pressure, double t, double q, double tol_t = 1e-3);
double temperature(const SemigroupSpec& spec, const SpherePoint& base, double t, double q, int depth,
                   double tol_t = 1e-3);

/// chi of the equilibrium state at s: minus the central slope of P with
/// step kChiStep (one-sided near s = 0).
double lyapunov_at(const PressureEstimator& pressure, double s);

struct SpectrumRow {
    double q = 0.0;
    double temperature = 0.0;
    double chi = 0.0;
    double alpha = 0.0;
    double dim = 0.0;
    double residual = 0.0;
};

SpectrumRow spectrum_row(const PressureEstimator& pressure, double t, double q, double tol_t = 1e-3);

struct SpectrumTable {
    double t = 0.0;
    double h_ref = 0.0;
    int depth = 0;
    double tol_t = 1e-3;
    std::vector<SpectrumRow> rows;
    double chi_spread = 0.0;
    bool degenerate = false;
    /// Table invariant violations (endpoint pinning, chi > 0, dim range).
    std::vector<std::string> violations;
};

/// q_grid must lie in [0, 1] and contain both endpoints (PreconditionError).
SpectrumTable spectrum_table(const PressureEstimator& pressure, double t, const std::vector<double>& q_grid,
                             double tol_t = 1e-3);
SpectrumTable spectrum_table(const SemigroupSpec& spec, const SpherePoint& base, double t,
                             const std::vector<double>& q_grid, int depth, double tol_t = 1e-3);

/// HD of the projected equilibrium measure: t + P(t) / chi(t).
double hd_of_measure(const PressureEstimator& pressure, double t);

/// max |second difference| of P over the grid; small means affine pressure.
double max_curvature(const PressureEstimator& pressure, const std::vector<double>& t_grid);

void write_csv(std::ostream& os, const SpectrumTable& table, std::uint64_t seed);

} // namespace semithermo
