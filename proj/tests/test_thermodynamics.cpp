#include "semithermo/errors.hpp"
#include "semithermo/pressure.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace semithermo;

namespace {

const double kLog2 = std::numbers::ln2;

std::vector<double> t_grid_13()
{
    std::vector<double> g;
    for (int k = 0; k <= 12; ++k) {
        g.push_back(0.2 * k);
    }
    return g;
}

} // namespace

TEST_CASE("z^2 pressure is (1 - t) log 2")
{
    const auto spec = corpus::z2();
    const PressureEstimator p(spec, SpherePoint(1.0), 10);
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        CHECK(std::abs(p(t) - (1.0 - t) * kLog2) < 1e-9);
    }
    // Off the unit circle the closed form still holds in the limit.
    const PressureEstimator q(spec, SpherePoint(cplx(0.4, 0.9)), 10);
    CHECK(std::abs(q(1.0)) < 1e-6);
}

TEST_CASE("P(0) is log of the total degree")
{
    CHECK(estimate_pressure(corpus::z2pm2(), SpherePoint(1.0), 0.0, 6) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(estimate_pressure(corpus::z2m2(), SpherePoint(1.5), 0.0, 6) == doctest::Approx(kLog2).epsilon(1e-14));
}

TEST_CASE("pressure matches the independent numpy oracle")
{
    // tests/oracles/pressure_oracle.py, depth 8, base 1, k_avg 3.
    const PressureEstimator p(corpus::z2pm2(), SpherePoint(1.0), 8);
    CHECK(p(0.5) == doctest::Approx(0.908676297919415).epsilon(1e-11));
    CHECK(p(1.0) == doctest::Approx(0.464159762247358).epsilon(1e-11));
    CHECK(p(1.5) == doctest::Approx(0.045917869054695).epsilon(1e-9));
    CHECK(p(2.0) == doctest::Approx(-0.353142489983976).epsilon(1e-11));

    const PressureEstimator c(corpus::z2m2(), SpherePoint(1.5), 10);
    CHECK(std::abs(c(1.0) - 0.000009262781442) < 1e-12);
}

TEST_CASE("Bowen root")
{
    SUBCASE("z^2")
    {
        const auto r = bowen_root(corpus::z2(), SpherePoint(1.0), 10, 1e-6);
        CHECK(std::abs(r.h - 1.0) < 1e-6);
        CHECK(r.lo <= r.h);
        CHECK(r.h <= r.hi);
    }
    SUBCASE("z^2 - 2 against the oracle")
    {
        const auto r = bowen_root(corpus::z2m2(), SpherePoint(1.5), 10);
        CHECK(std::abs(r.h - 1.000013362452481) < 1e-4);
    }
    SUBCASE("<z^2+2, z^2-2> against the oracle")
    {
        const auto r = bowen_root(corpus::z2pm2(), SpherePoint(1.0), 8);
        CHECK(std::abs(r.h - 1.556480103997760) < 1e-3);
        CHECK(r.h > 1.0);
        CHECK(r.h < 2.0);
        CHECK(r.hi - r.lo <= 1e-3);
    }
}

TEST_CASE("shape laws hold on a 13-point grid")
{
    const auto curve = pressure_curve(corpus::z2pm2(), SpherePoint(1.0), SpherePoint(1.3), t_grid_13(), 8);
    CHECK(curve.violations.empty());
    for (std::size_t i = 1; i < curve.estimates.size(); ++i) {
        CHECK(curve.estimates[i] < curve.estimates[i - 1]);
        // Lipschitz bound from the largest one-step derivative, and
        // P(t) - P(s) <= -(log of the smallest expansion)(t - s) is not assumed.
        CHECK(curve.estimates[i - 1] - curve.estimates[i] <= curve.lipschitz_bound * 0.2 + 1e-12);
    }
    for (std::size_t i = 1; i + 1 < curve.estimates.size(); ++i) {
        CHECK(curve.estimates[i + 1] - 2 * curve.estimates[i] + curve.estimates[i - 1] >= -kTauConv);
    }
    CHECK(curve.cross_check_gap <= 5e-3);
}

TEST_CASE("shape-law checker reports a non-monotone curve")
{
    PressureCurve c;
    c.t_grid = {0.0, 1.0, 2.0};
    c.estimates = {1.0, 1.1, 0.0};
    check_shape_laws(c);
    CHECK_FALSE(c.violations.empty());
}

TEST_CASE("Lyapunov exponent and variance from the curve")
{
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) {
        grid.push_back(0.1 * k);
    }
    const auto flat = pressure_curve(corpus::z2(), SpherePoint(1.0), SpherePoint(1.3), grid, 10);
    CHECK(lyapunov_from_slope(flat, 1.0) == doctest::Approx(kLog2).epsilon(1e-9));
    const auto v = variance_from_curvature(flat, 1.0);
    CHECK(v.value == doctest::Approx(0.0).epsilon(1e-6));

    const auto curve = pressure_curve(corpus::z2pm2(), SpherePoint(1.0), SpherePoint(1.3), grid, 8);
    CHECK(lyapunov_from_slope(curve, 1.0) > 0.0);
    CHECK(variance_from_curvature(curve, 1.0).value > 0.0);
    CHECK_THROWS_AS(lyapunov_from_slope(curve, 5.0), GridTooCoarse);
}

TEST_CASE("estimates do not depend on the thread count")
{
    const PressureEstimator a(corpus::z2pm2(), SpherePoint(1.0), 8);
    const PressureEstimator b(corpus::z2pm2(), SpherePoint(1.0), 8);
    CHECK(a(0.7) == b(0.7));
    CHECK(a.evaluate(0.7).spread == b.evaluate(0.7).spread);
}

TEST_CASE("CSV output")
{
    const auto r = bowen_root(corpus::z2(), SpherePoint(1.0), 6);
    std::ostringstream os;
    write_csv(os, r);
    CHECK(os.str().rfind("h,bracket_lo,bracket_hi,residual,depth\n", 0) == 0);
}
