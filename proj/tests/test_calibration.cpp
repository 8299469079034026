#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lobsim/calibration.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/samplers.hpp"

using namespace lobsim;

namespace {

CalibrationInput synthesize(const ModelParams& params, std::int64_t n_days, double phi_up,
                            double phi_down, Ticks initial_price = 10000) {
    SimulationConfig config;
    config.n_days = n_days;
    config.phi_up = phi_up;
    config.phi_down = phi_down;
    config.initial_price = initial_price;
    CalibrationInput input;
    input.steps_per_day = params.steps_per_day;
    config.event_sink = [&](const OrderEvent& ev) { input.events.push_back(ev); };
    const SimulationResult result = run_simulation(params, config);
    input.daily = result.days;
    return input;
}

}  // namespace

TEST_SUITE_BEGIN("calibration");

TEST_CASE("lognormal histogram fit round-trips the sampler") {
    Rng rng(1515u);
    std::vector<double> samples(1000000);
    for (double& s : samples) s = sample_cancel_level(-2.36, 1.13, rng);
    const auto [mu, sigma] = fit_lognormal_hist(samples);
    CHECK(std::abs(mu + 2.36) < 0.05);
    CHECK(std::abs(sigma - 1.13) < 0.05);
}

TEST_CASE("lognormal fit recovers a near-degenerate scale") {
    Rng rng(808u);
    std::vector<double> samples(20000);
    for (double& s : samples) s = std::exp(-2.0 + 0.01 * rng.normal());
    const auto [mu, sigma] = fit_lognormal_hist(samples);
    CHECK(std::abs(mu + 2.0) < 0.05);
    CHECK(sigma < 0.05);
}

TEST_CASE("lognormal fit input validation") {
    CHECK_THROWS_AS(fit_lognormal_hist(std::vector<double>(100, 0.5)), std::invalid_argument);
    std::vector<double> bad(2000, 0.5);
    bad[0] = 1.5;
    CHECK_THROWS_AS(fit_lognormal_hist(bad), std::invalid_argument);
}

TEST_CASE("queue-position fit round-trips the sampler") {
    Rng rng(2626u);
    std::vector<double> samples(1000000);
    for (double& s : samples) s = sample_cancel_position(-33.78, rng);
    const double gamma = fit_exp_position_hist(samples);
    CHECK(std::abs(gamma + 33.78) < 0.1 * 33.78);
}

TEST_CASE("uniform positions drive gamma to the flat regime") {
    Rng rng(3737u);
    std::vector<double> samples(200000);
    for (double& s : samples) s = 1.0 - rng.uniform();
    const double gamma = fit_exp_position_hist(samples);
    CHECK(gamma < -100.0);
}

TEST_CASE("closed-loop calibration recovers the generating parameters") {
    ModelParams params;
    params.steps_per_day = 20000;
    params.seed = 20240601;
    const CalibrationInput input = synthesize(params, 20, 0.10, -0.10);
    const ModelParams recovered = estimate_params(input);

    CHECK(std::abs(recovered.h_s - params.h_s) <= 0.05);
    CHECK(std::abs(recovered.h_x - params.h_x) <= 0.05);
    CHECK(std::abs(recovered.cancel_prob - params.cancel_prob) <= 0.01);
    CHECK(ks_distance(recovered.price_cdf, params.price_cdf) <= 0.02);
}

TEST_CASE("calibration is deterministic for a fixed stream") {
    ModelParams params;
    params.steps_per_day = 5000;
    params.seed = 31337;
    const CalibrationInput input = synthesize(params, 4, 0.10, -0.10);
    const ModelParams a = estimate_params(input);
    const ModelParams b = estimate_params(input);
    CHECK(a.h_s == b.h_s);
    CHECK(a.h_x == b.h_x);
    CHECK(a.cancel_prob == b.cancel_prob);
    CHECK(a.price_cdf.support() == b.price_cdf.support());
}

TEST_CASE("zero-cancel stream estimates a zero cancel rate") {
    ModelParams params;
    params.steps_per_day = 20000;
    params.seed = 5;
    params.cancel_prob = 0.0;
    const CalibrationInput input = synthesize(params, 1, 0.10, -0.10);
    const ModelParams recovered = estimate_params(input);
    CHECK(recovered.cancel_prob == 0.0);
}

TEST_CASE("cancel of an unknown order reports the offending event") {
    CalibrationInput input;
    input.steps_per_day = 100;
    input.daily = {DayRecord{0, 1000, 900, 1100, false}};
    input.events = {
        {0, 'B', 999, 10, 1},
        {0, 'S', 1001, 10, 2},
        {1, 'C', 999, 10, 777},  // never placed
    };
    CHECK_THROWS_WITH_AS(estimate_params(input),
                         doctest::Contains("at event 2"), std::runtime_error);
}

TEST_CASE("events beyond the daily table are rejected") {
    CalibrationInput input;
    input.steps_per_day = 10;
    input.daily = {DayRecord{0, 1000, 900, 1100, false}};
    input.events = {{0, 'B', 999, 10, 1}, {25, 'S', 1001, 10, 2}};
    CHECK_THROWS_AS(estimate_params(input), std::runtime_error);
}

TEST_SUITE_END();
