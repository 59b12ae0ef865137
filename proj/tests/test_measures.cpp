#include "semithermo/errors.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/pressure.hpp"
#include "semithermo/render.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace semithermo;

TEST_CASE("atom masses sum to one and satisfy the quasi-invariance identity")
{
    const std::pair<SemigroupSpec, double> cases[] = {{corpus::z2(), 1.0}, {corpus::z2m2(), 1.5}, {corpus::z2pm2(), 1.0}};
    for (const auto& [spec, b] : cases) {
        const SpherePoint base(b);
        for (double t : {0.0, 1.0, 1.5}) {
            const double p = estimate_pressure(spec, base, t, 7);
            const auto m = conformal_atoms(spec, base, t, p + 0.2, 7);
            CHECK(std::abs(m.total_mass() - 1.0) <= 1e-12);
            CHECK(quasi_invariance_defect(spec, m) <= 1e-9);
            for (const auto& a : m.atoms) {
                CHECK(a.weight > 0.0);
            }
        }
    }
}

TEST_CASE("z^2 level masses decay like exp(-s n) at t = 1")
{
    const auto m = conformal_atoms(corpus::z2(), SpherePoint(1.0), 1.0, 0.1, 10);
    for (int k = 2; k <= 10; ++k) {
        CHECK(m.level_mass[static_cast<std::size_t>(k)] / m.level_mass[static_cast<std::size_t>(k - 1)] ==
              doctest::Approx(std::exp(-0.1)).epsilon(1e-12));
    }
    CHECK(m.tail_bound > 0.0);
}

TEST_CASE("summability guard")
{
    const auto spec = corpus::z2pm2();
    const double p = estimate_pressure(spec, SpherePoint(1.0), 1.0, 8);
    CHECK_THROWS_AS(conformal_atoms(spec, SpherePoint(1.0), 1.0, p - 0.01, 8), SeriesNotSummable);
    CHECK_THROWS_AS(conformal_atoms(spec, SpherePoint(1.0), 1.0, p, 8), SeriesNotSummable);
}

TEST_CASE("sampler branch probabilities")
{
    SUBCASE("z^2 on the circle at t = 1 is uniform over two branches")
    {
        const auto o = sample_backward_orbit(corpus::z2(), SpherePoint(std::polar(1.0, 0.3)), 1.0, 30, 4);
        for (double lw : o.log_weights) {
            CHECK(std::exp(lw) == doctest::Approx(0.5).epsilon(1e-9));
        }
    }
    SUBCASE("t = 0 is uniform over all four branches")
    {
        const auto o = sample_backward_orbit(corpus::z2pm2(), SpherePoint(1.0), 0.0, 30, 4);
        for (double lw : o.log_weights) {
            CHECK(std::exp(lw) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("sampled orbits are consistent and deterministic")
{
    const auto spec = corpus::z2pm2();
    const auto a = sample_backward_orbit(spec, SpherePoint(1.0), 1.3, 200, 17);
    const auto b = sample_backward_orbit(spec, SpherePoint(1.0), 1.3, 200, 17);
    CHECK(a.symbols == b.symbols);
    CHECK(a.log_weights == b.log_weights);
    REQUIRE(a.points.size() == 201);
    for (std::size_t k = 0; k + 1 < a.points.size(); ++k) {
        CHECK(a.points[k] == b.points[k]);
        const SpherePoint fwd = evaluate(spec.generators[a.symbols[k]], a.points[k + 1]);
        CHECK(chordal_distance(fwd, a.points[k]) <= 10 * 1e-12);
    }
}

TEST_CASE("Birkhoff diagnostics")
{
    const auto flat = birkhoff_diagnostics(corpus::z2(), 0.7, 20, 200, 1);
    CHECK(flat.degenerate);
    CHECK(flat.mean == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(flat.variance < 1e-12);

    const auto spec = corpus::z2pm2();
    const double h = bowen_root(spec, SpherePoint(1.0), 8).h;
    const auto rep = birkhoff_diagnostics(spec, h, 50, 20000, 1);
    CHECK_FALSE(rep.degenerate);
    CHECK(std::abs(rep.skewness) < 0.2);
    CHECK(std::abs(rep.excess_kurtosis) < 0.5);
    const auto again = birkhoff_diagnostics(spec, h, 50, 20000, 1);
    CHECK(again.mean == rep.mean);
    CHECK(again.variance == rep.variance);

    CHECK_THROWS_AS(birkhoff_diagnostics(spec, h, 50, 0, 1), PreconditionError);
}

TEST_CASE("transfer operator agrees with the tree estimate")
{
    struct Case {
        SemigroupSpec spec;
        SpherePoint base;
    };
    const Case cases[] = {{corpus::z2(), SpherePoint(1.0)},
                          {corpus::z2m2(), SpherePoint(1.5)},
                          {corpus::z2pm2(), SpherePoint(1.0)}};
    for (const auto& c : cases) {
        const GridImage img = render_global(c.spec, 200000, 5, GridSpec{});
        const auto grid = grid_from_render(c.spec, img, 32);
        REQUIRE(grid.size() == 32);
        const PressureEstimator est(c.spec, c.base, 8);
        const double h = bowen_root(est).h;
        for (double t : {0.0, h}) {
            const auto tc = transfer_operator_check(c.spec, grid, t, 8);
            const auto pv = est.evaluate(t);
            CHECK(std::abs(tc.value - pv.value) <= tc.spread + pv.spread);
        }
    }
    const auto z2 = corpus::z2();
    const auto grid = grid_from_render(z2, render_global(z2, 200000, 5, GridSpec{}), 32);
    CHECK(std::abs(transfer_operator_check(z2, grid, 1.0, 10).value) < 1e-6);
    CHECK(transfer_operator_check(z2, grid, 0.0, 4).value == doctest::Approx(std::log(2.0)));
    const auto pm = corpus::z2pm2();
    const auto grid2 = grid_from_render(pm, render_global(pm, 200000, 5, GridSpec{}), 32);
    CHECK(transfer_operator_check(pm, grid2, 0.0, 4).value == doctest::Approx(std::log(4.0)));
}
