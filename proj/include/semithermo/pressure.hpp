#pragma once

#include "semithermo/preimage_tree.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace semithermo {

inline constexpr double kTauMono = 1e-3;
inline constexpr double kTauConv = 1e-3;
inline constexpr int kDefaultKAvg = 3;
/// Spreads are never reported below this roundoff floor.
inline constexpr double kSpreadFloor = 1e-12;

struct PressureValue {
    double value = 0.0;
    /// max - min of the averaged level increments.
    double spread = 0.0;
};

/// Pressure estimates P_n(t) from one enumerated preimage profile.
///
/// P_n(t) is the mean of the last k_avg increments S_j(t) - S_{j-1}(t), where
/// S_j is the log weight sum of level j. The profile is built once; every t
/// reuses it.
class PressureEstimator {
public:
    PressureEstimator(const SemigroupSpec& spec, const SpherePoint& base, int depth, int k_avg = kDefaultKAvg,
                      const TreeOptions& opts = {});

    PressureValue evaluate(double t) const;
    double operator()(double t) const { return evaluate(t).value; }

    int depth() const { return profile_.depth; }
    int k_avg() const { return k_avg_; }
    const SpherePoint& base_point() const { return profile_.base_point; }
    /// Discrete surrogate of log ||f'||_inf: largest one-step log derivative.
    double lipschitz_bound() const { return profile_.max_step_log_sderiv; }
    const LevelProfile& profile() const { return profile_; }

private:
    LevelProfile profile_;
    int k_avg_;
};

double estimate_pressure(const SemigroupSpec& spec, const SpherePoint& base, double t, int depth,
                         int k_avg = kDefaultKAvg, const TreeOptions& opts = {});

struct PressureCurve {
    std::vector<double> t_grid;
    int depth = 0;
    int k_avg = kDefaultKAvg;
    std::vector<double> estimates;
    std::vector<double> increment_spreads;
    std::vector<double> alt_estimates;
    SpherePoint base_point;
    SpherePoint base_point_alt;
    double cross_check_gap = 0.0;
    double lipschitz_bound = 0.0;
    /// Shape-law violations found on the grid; empty when all hold.
    std::vector<std::string> violations;
};

/// Samples P_n on t_grid at two base points. Invariant violations
/// (monotonicity, convexity, P(0) >= log 2) are recorded, not corrected.
PressureCurve pressure_curve(const SemigroupSpec& spec, const SpherePoint& base, const SpherePoint& base_alt,
                             const std::vector<double>& t_grid, int depth, int k_avg = kDefaultKAvg,
                             const TreeOptions& opts = {});

/// Same, from already-built estimators.
PressureCurve pressure_curve(const PressureEstimator& main, const PressureEstimator& alt,
                             const std::vector<double>& t_grid);

/// Shape checks used by pressure_curve; appends messages to the curve.
void check_shape_laws(PressureCurve& curve, double tau_mono = kTauMono, double tau_conv = kTauConv);

struct BowenResult {
    double h = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double residual = 0.0;
    int depth = 0;
};

/// Zero of P_n by bisection. The bracket starts at [0, 2] and doubles while
/// P_n(hi) > 0; NoSignChange when no negative value appears up to t = 64.
/// The final root is the linear interpolant inside the last bracket.
BowenResult bowen_root(const PressureEstimator& pressure, double tol_t = 1e-3);
BowenResult bowen_root(const SemigroupSpec& spec, const SpherePoint& base, int depth, double tol_t = 1e-3,
                       int k_avg = kDefaultKAvg, const TreeOptions& opts = {});

/// Lyapunov exponent as minus the central slope of the curve at t.
double lyapunov_from_slope(const PressureCurve& curve, double t);

struct VarianceEstimate {
    double value = 0.0;
    double second_difference = 0.0;
    /// Raw curvature was negative but within tau_conv and was reported as 0.
    bool clamped = false;
};

/// Second central difference over h^2 at grid point t. The grid must be
/// uniform around t.
VarianceEstimate variance_from_curvature(const PressureCurve& curve, double t, double tau_conv = kTauConv);

void write_csv(std::ostream& os, const PressureCurve& curve);
void write_csv(std::ostream& os, const BowenResult& result);

} // namespace semithermo
