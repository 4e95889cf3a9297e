#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"
#include "paddle/mechanics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace paddle;

namespace {

ValidatedModel with_stress(double sigma0)
{
    PaddleModel p;
    p.film.sigma0 = sigma0;
    return validate_model(p);
}

}  // namespace

TEST_CASE("bending stress")
{
    CHECK(bending_stress(0.0, 1e-3, 5e-3, 40e-6) == 0.0);
    CHECK(bending_stress(1e-3, 3e-3, 5e-3, 40e-6) == doctest::Approx(2.25e6).epsilon(1e-14));
    CHECK(bending_stress(1e-3, 3e-3, 5e-3, 80e-6) == doctest::Approx(2.25e6 / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(bending_stress(1e-3, 1e-3, 0.0, 40e-6), InvalidParameter);
    CHECK_THROWS_AS(bending_stress(1e-3, 1e-3, 5e-3, -1.0), InvalidParameter);
}

TEST_CASE("stress profile")
{
    const PaddleGeometry g;
    const auto tri = stress_profile(1e-3, g, BeamPlan::Triangular, 50);
    CHECK(tri.samples.size() == 50);
    CHECK(tri.uniformity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tri.samples.front().x == doctest::Approx(0.1 * g.l_b));
    CHECK(tri.samples.back().x == g.l_b);

    const auto rect = stress_profile(1e-3, g, BeamPlan::Rectangular, 50);
    CHECK(rect.uniformity == doctest::Approx(10.0).epsilon(1e-12));

    const auto zero = stress_profile(0.0, g, BeamPlan::Rectangular, 5);
    CHECK(zero.uniformity == 1.0);
    for (const auto& s : zero.samples) CHECK(s.sigma == 0.0);

    CHECK_THROWS_AS(stress_profile(1e-3, g, BeamPlan::Triangular, 1), InvalidParameter);

    SUBCASE("triangular plan is uniform for random loads and geometry")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> load(-1e-2, 1e-2), len(1e-3, 1e-2), thick(5e-6, 80e-6);
        for (int i = 0; i < 100; ++i) {
            PaddleGeometry gg;
            gg.l_b = len(rng);
            gg.b_root = len(rng);
            gg.t_b = thick(rng);
            const auto p = stress_profile(load(rng), gg, BeamPlan::Triangular, 64);
            REQUIRE(std::abs(p.uniformity - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("compliance")
{
    const auto m = validate_model(PaddleModel{});
    CHECK(compliance(m) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));

    PaddleModel thick;
    thick.geom.t_b = 80e-6;
    thick.geom.d_c = 200e-6;
    CHECK(compliance(validate_model(thick)) == doctest::Approx(compliance(m) / 8.0).epsilon(1e-14));

    PaddleModel no_paddle;
    no_paddle.geom.l_p = 1e-300;
    const auto& g = no_paddle.geom;
    CHECK(compliance(validate_model(no_paddle)) ==
          doctest::Approx(6.0 * g.l_b * g.l_b / (180e9 * 0.3 * std::pow(g.t_b, 3))).epsilon(1e-14));
}

TEST_CASE("film force")
{
    CHECK(film_force(0.0, validate_model(PaddleModel{})) == 0.0);

    const auto m = with_stress(100e6);
    CHECK(film_strain_gradient(m.geom()) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(film_force(0.0, m) == doctest::Approx(2.5e-4).epsilon(1e-12));

    const double slope = oracle::central_difference([&](double y) { return film_force(y, m); }, 5e-6, 1e-9);
    CHECK(slope == doctest::Approx(-70e9 * 1.5e-12 * 25.0 / 9.0).epsilon(1e-6));
    CHECK(slope == doctest::Approx(-0.2916666667).epsilon(1e-6));
}

TEST_CASE("total force")
{
    const auto zero = total_force(0.0, 0.0, 0.0, validate_model(PaddleModel{}));
    CHECK(zero.F_film == 0.0);
    CHECK(zero.F_beam == 0.0);
    CHECK(zero.F_elec_top == 0.0);
    CHECK(zero.F_elec_bottom == 0.0);
    CHECK(zero.F_total == 0.0);

    const auto m = with_stress(100e6);
    const auto b = total_force(12e-6, 3.0, 40.0, m);
    CHECK(b.F_total == b.F_film + b.F_beam + b.F_elec_top + b.F_elec_bottom);

    // Bottom voltage shifts the total down by |f| V^2.
    const double f = electrostatic_force_per_v2(12e-6, m, Electrode::Bottom).f;
    const auto base = total_force(12e-6, 0.0, 0.0, m);
    const auto pulled = total_force(12e-6, 0.0, 40.0, m);
    CHECK(pulled.F_elec_bottom == f * 1600.0);
    CHECK(pulled.F_total - base.F_total == doctest::Approx(f * 1600.0).epsilon(1e-12));

    CHECK_THROWS_AS(total_force(70e-6, 0.0, 0.0, m), TouchViolation);

    SUBCASE("single zero crossing at V = 0")
    {
        CHECK(total_force(0.0, 0.0, 0.0, m).F_total > 0.0);
        const auto ys = oracle::linspace(m.touch().y_p_min * 0.999999, m.touch().y_p_max * 0.999999, 5000);
        int crossings = 0;
        for (std::size_t i = 1; i < ys.size(); ++i)
            if ((total_force(ys[i - 1], 0, 0, m).F_total > 0) != (total_force(ys[i], 0, 0, m).F_total > 0)) ++crossings;
        CHECK(crossings == 1);
    }
}

TEST_CASE("equilibrium at zero voltage")
{
    CHECK(std::abs(solve_equilibrium(validate_model(PaddleModel{}), 0.0, 0.0).y_p) <= 1e-12);

    const auto m = with_stress(100e6);
    const auto s = solve_equilibrium(m, 0.0, 0.0);
    CHECK(s.y_p == doctest::Approx(2.5e-4 / (70e9 * 1.5e-12 * 25.0 / 9.0 + 24.0)).epsilon(1e-10));
    CHECK(s.y_p == doctest::Approx(1.029159519725e-5).epsilon(1e-10));
    CHECK(s.stable);
    CHECK(s.C_top == paddle_capacitance(s.y_p, m, Electrode::Top).C);

    SUBCASE("closed form and linearity over stresses")
    {
        const double y100 = solve_equilibrium(with_stress(100e6), 0, 0).y_p;
        for (double sigma : {50e6, -50e6, 100e6, -100e6, 200e6, -200e6, 300e6, -300e6}) {
            const auto mm = with_stress(sigma);
            const auto sol = solve_equilibrium(mm, 0.0, 0.0);
            REQUIRE(oracle::rel_diff(sol.y_p, zero_voltage_equilibrium(mm)) <= 1e-10);
            REQUIRE(oracle::rel_diff(sol.y_p / y100, sigma / 100e6) <= 1e-10);
            const double scale = std::max(std::abs(film_force(0.0, mm)), mm.touch().y_p_max / compliance(mm));
            REQUIRE(std::abs(sol.residual) <= 1e-15 * scale);
        }
    }
}

TEST_CASE("equilibrium under actuation")
{
    const auto m = with_stress(100e6);
    for (auto e : {Electrode::Top, Electrode::Bottom}) {
        const double vpi = pull_in_voltage(m, e).voltage;
        double prev = solve_equilibrium(m, e, 0.0).y_p;
        for (double frac : {0.2, 0.4, 0.6, 0.8, 0.95, 0.999}) {
            const auto sol = solve_equilibrium(m, e, frac * vpi);
            CHECK(sol.stable);
            const double V = frac * vpi;
            const auto force = [&](double y) {
                return e == Electrode::Top ? total_force(y, V, 0.0, m).F_total : total_force(y, 0.0, V, m).F_total;
            };
            CHECK(oracle::central_difference(force, sol.y_p, 1e-9) < 0.0);
            if (e == Electrode::Bottom)
                CHECK(sol.y_p < prev);
            else
                CHECK(sol.y_p > prev);
            prev = sol.y_p;
        }
    }

    // Far above pull-in the force is negative across the whole window.
    const double V = 10.0 * pull_in_voltage(m, Electrode::Bottom).voltage;
    CHECK_THROWS_AS(solve_equilibrium(m, Electrode::Bottom, V), NoStableEquilibrium);
    for (double y : oracle::linspace(m.touch().y_p_min * 0.999, m.touch().y_p_max * 0.999, 2001))
        REQUIRE(total_force(y, 0.0, V, m).F_total < 0.0);
}

TEST_CASE("pull-in voltage")
{
    SUBCASE("brackets the loss of stability")
    {
        const auto m = validate_model(PaddleModel{});
        const auto pi = pull_in_voltage(m, Electrode::Bottom);
        CHECK(pi.voltage - pi.last_stable_voltage <= kPullInRelativeTolerance * pi.voltage);
        CHECK(solve_equilibrium(m, Electrode::Bottom, pi.voltage * 0.999).stable);
        CHECK_THROWS_AS(solve_equilibrium(m, Electrode::Bottom, pi.voltage * 1.001), NoStableEquilibrium);
        CHECK(pi.y_p_before < 0.0);
        CHECK(pi.y_p_before > m.touch().y_p_min);
    }

    SUBCASE("grows with the actuation gap")
    {
        double prev = 0.0;
        for (double d_e : {100e-6, 150e-6, 200e-6}) {
            PaddleModel p;
            p.geom.d_e = d_e;
            const double v = pull_in_voltage(validate_model(p), Electrode::Bottom).voltage;
            CHECK(v > prev);
            prev = v;
        }
    }

    SUBCASE("tensile prestress changes bottom pull-in")
    {
        const double v0 = pull_in_voltage(with_stress(0.0), Electrode::Bottom).voltage;
        const double v100 = pull_in_voltage(with_stress(100e6), Electrode::Bottom).voltage;
        CHECK(v100 > v0);
        // Dense-scan oracle: a stable root exists iff the force is positive
        // somewhere in the window (it is negative at the bottom touch limit).
        const auto m = with_stress(100e6);
        const auto ys = oracle::linspace(m.touch().y_p_min * 0.999999, m.touch().y_p_max * 0.999999, 20001);
        const auto stable_at = [&](double V) {
            return std::any_of(ys.begin(), ys.end(), [&](double y) { return total_force(y, 0, V, m).F_total > 0; });
        };
        double V = std::floor(v100) - 2.0;
        while (stable_at(V)) V += 0.01;
        CHECK(std::abs(V - v100) <= 0.01);
    }

    SUBCASE("no stable state at zero voltage propagates")
    {
        PaddleModel p;
        p.film.sigma0 = 5e9;  // pushes the zero-voltage state past the top
        CHECK_THROWS_AS(pull_in_voltage(validate_model(p), Electrode::Bottom), NoStableEquilibrium);
    }
}

TEST_CASE("voltage sweep")
{
    const auto m = with_stress(100e6);
    const std::vector<double> zero{0.0};
    const auto single = sweep_voltage(m, Electrode::Bottom, zero);
    REQUIRE(single.records.size() == 1);
    CHECK(single.records[0].y_p == solve_equilibrium(m, 0.0, 0.0).y_p);
    CHECK_FALSE(single.truncated);

    const double vpi = pull_in_voltage(m, Electrode::Bottom).voltage;
    std::vector<double> volts = oracle::linspace(0.0, 1.2 * vpi, 61);
    std::reverse(volts.begin(), volts.end());
    const auto sweep = sweep_voltage(m, Electrode::Bottom, volts);
    CHECK(sweep.truncated);
    REQUIRE(sweep.first_unstable_V);
    CHECK(*sweep.first_unstable_V >= vpi);
    const auto below = std::count_if(volts.begin(), volts.end(), [&](double v) { return v < vpi; });
    CHECK(sweep.records.size() == static_cast<std::size_t>(below));
    for (std::size_t i = 1; i < sweep.records.size(); ++i) {
        REQUIRE(sweep.records[i].V > sweep.records[i - 1].V);
        REQUIRE(sweep.records[i].y_p < sweep.records[i - 1].y_p);
    }

    const auto reference = sweep_voltage_serial(m, Electrode::Bottom, volts);
    REQUIRE(reference.records.size() == sweep.records.size());
    for (std::size_t i = 0; i < sweep.records.size(); ++i) {
        REQUIRE(reference.records[i].y_p == sweep.records[i].y_p);
        REQUIRE(reference.records[i].breakdown.F_total == sweep.records[i].breakdown.F_total);
    }

    const std::vector<double> bad{1.0, -2.0};
    CHECK_THROWS_AS(sweep_voltage(m, Electrode::Bottom, bad), InvalidParameter);
    CHECK_THROWS_AS(sweep_voltage(m, Electrode::Bottom, std::vector<double>{}), InvalidParameter);
}
