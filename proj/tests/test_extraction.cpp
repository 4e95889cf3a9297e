#include "paddle/electrostatics.hpp"
#include "paddle/errors.hpp"
#include "paddle/extraction.hpp"
#include "paddle/mechanics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace paddle;

namespace {

ValidatedModel film_model(double sigma0, double EFVF_scale = 1.0)
{
    PaddleModel p;
    p.film.sigma0 = sigma0;
    p.film.t_F *= EFVF_scale;
    return validate_model(p);
}

std::vector<double> actuation_voltages(const ValidatedModel& m, Electrode e, std::size_t n)
{
    return oracle::linspace(0.0, 0.8 * pull_in_voltage(m, e).voltage, n);
}

constexpr double kDefaultEFVF = 70e9 * 1.5e-12;

}  // namespace

TEST_CASE("deflection series")
{
    const auto m = validate_model(PaddleModel{});
    const double C10 = paddle_capacitance(10e-6, m, Electrode::Top).C;
    const auto clean = measure_capacitance(C10, NoiseModel{0.0, 1e-2, 0}, 10);
    for (const auto& p : deflection_series(clean, m, Electrode::Top)) CHECK(std::abs(p.y_p - 10e-6) <= 1e-12);

    SUBCASE("noise propagates through the capacitance slope")
    {
        NoiseModel n;
        n.seed = 5;
        const auto noisy = measure_capacitance(paddle_capacitance(0.0, m, Electrode::Top).C, n, 4000);
        const auto series = deflection_series(noisy, m, Electrode::Top);
        double mean = 0.0;
        for (const auto& p : series) mean += p.y_p;
        mean /= static_cast<double>(series.size());
        double ss = 0.0;
        for (const auto& p : series) ss += (p.y_p - mean) * (p.y_p - mean);
        const double sd = std::sqrt(ss / static_cast<double>(series.size() - 1));
        const double slope = oracle::central_difference(
            [&](double y) { return paddle_capacitance(y, m, Electrode::Top).C; }, 0.0, 1e-9);
        CHECK(sd == doctest::Approx(n.sigma_C / slope).epsilon(0.05));
        CHECK(sd < 10e-9);
    }

    SUBCASE("out-of-range row is reported")
    {
        auto samples = clean;
        samples[6].C_meas = 10e-12;
        try {
            deflection_series(samples, m, Electrode::Top);
            FAIL("expected OutOfRange");
        } catch (const OutOfRange& e) {
            REQUIRE(e.row());
            CHECK(*e.row() == 6);
        }
    }
}

TEST_CASE("film parameter substitution")
{
    const auto tmpl = validate_model(PaddleModel{});
    const auto m = with_film(tmpl, 150e6, 0.2);
    CHECK(m.film().sigma0 == 150e6);
    CHECK(m.film().E_F * m.film_volume() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(m.film().E_F == tmpl.film().E_F);
}

TEST_CASE("noise-free round trip")
{
    const auto truth = film_model(200e6);
    const auto data = simulate_cv(truth, Electrode::Bottom, actuation_voltages(truth, Electrode::Bottom, 21),
                                  NoiseModel{0.0, 1e-2, 0});
    CHECK(std::holds_alternative<SimulatedSource>(data.provenance));

    const auto fit = fit_film_parameters(data, validate_model(PaddleModel{}));
    CHECK(fit.converged);
    CHECK(oracle::rel_diff(fit.sigma0_hat, 200e6) <= 1e-6);
    CHECK(oracle::rel_diff(fit.EFVF_hat, kDefaultEFVF) <= 1e-6);
    CHECK(fit.rms_residual <= 1e-18);
    CHECK(fit.gradient_norm < 1e-8);
}

TEST_CASE("round trip over random film parameters")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> stress(20e6, 400e6), volume(0.5, 1.5);
    const auto tmpl = validate_model(PaddleModel{});
    for (int i = 0; i < 25; ++i) {
        const double sigma0 = stress(rng);
        const double scale = volume(rng);
        const auto truth = film_model(sigma0, scale);
        const auto e = i % 2 == 0 ? Electrode::Bottom : Electrode::Top;
        const auto data = simulate_cv(truth, e, actuation_voltages(truth, e, 9), NoiseModel{0.0, 1e-2, 0});
        const auto fit = fit_film_parameters(data, tmpl);
        INFO("case " << i << " sigma0 " << sigma0 << " scale " << scale);
        REQUIRE(fit.converged);
        REQUIRE(oracle::rel_diff(fit.sigma0_hat, sigma0) <= 1e-6);
        REQUIRE(oracle::rel_diff(fit.EFVF_hat, kDefaultEFVF * scale) <= 1e-6);
        REQUIRE(fit.rms_residual <= 1e-18);
        for (std::size_t k = 1; k < fit.objective_history.size(); ++k)
            REQUIRE(fit.objective_history[k] <= fit.objective_history[k - 1]);
    }
}

TEST_CASE("noisy fits stay first-order optimal")
{
    const auto truth = film_model(200e6);
    const auto volts = actuation_voltages(truth, Electrode::Bottom, 21);
    const auto tmpl = validate_model(PaddleModel{});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        NoiseModel n;
        n.seed = seed;
        const auto fit = fit_film_parameters(simulate_cv(truth, Electrode::Bottom, volts, n), tmpl);
        CHECK(fit.converged);
        CHECK(std::isfinite(fit.rms_residual));
        CHECK(fit.gradient_norm < 1e-8);
        CHECK(fit.rms_residual == doctest::Approx(1e-16).epsilon(0.5));
        for (std::size_t k = 1; k < fit.objective_history.size(); ++k)
            CHECK(fit.objective_history[k] <= fit.objective_history[k - 1]);
    }
}

TEST_CASE("iteration budget exhaustion is reported, not thrown")
{
    // Start far from the answer: template prestress guess is from a
    // much stiffer film.
    const auto truth = film_model(300e6, 1.5);
    const auto data = simulate_cv(truth, Electrode::Bottom, actuation_voltages(truth, Electrode::Bottom, 7),
                                  NoiseModel{0.0, 1e-2, 0});
    FitOptions opts;
    opts.max_iterations = 1;
    const auto fit = fit_film_parameters(data, validate_model(PaddleModel{}), opts);
    CHECK_FALSE(fit.converged);
    CHECK(fit.iterations == 1);
    CHECK(std::isfinite(fit.sigma0_hat));
}

TEST_CASE("dataset checks")
{
    const auto tmpl = validate_model(PaddleModel{});
    CVDataset same_voltage;
    for (int i = 0; i < 5; ++i) same_voltage.rows.push_back({10.0, 2.3e-12, Electrode::Bottom});
    CHECK_THROWS_AS(fit_film_parameters(same_voltage, tmpl), DegenerateData);

    CVDataset short_data;
    short_data.rows = {{0.0, 2.3e-12, Electrode::Bottom}, {10.0, 2.2e-12, Electrode::Bottom}};
    CHECK_THROWS_AS(fit_film_parameters(short_data, tmpl), InsufficientData);

    CVDataset negative;
    negative.rows = {{0.0, 2.3e-12, Electrode::Bottom}, {-1.0, 2.2e-12, Electrode::Bottom}, {2.0, 2.2e-12, Electrode::Bottom}};
    CHECK_THROWS_AS(fit_film_parameters(negative, tmpl), InvalidParameter);
}
