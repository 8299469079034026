#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <vector>

#include "lobsim/rng.hpp"
#include "lobsim/stats.hpp"

using namespace lobsim;

namespace {

std::vector<double> pareto_samples(double alpha, double x_min, std::size_t n, std::uint64_t seed) {
    // Density exponent alpha: p(x) ~ x^{-alpha} for x >= x_min.
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = x_min * std::pow(1.0 - rng.uniform(), -1.0 / (alpha - 1.0));
    return out;
}

// Divergence-rate table for up-dominant limit pairs (values x 1e-5) and
// half-life table for down-dominant pairs (values x 1e4), keyed by
// (phi_down, phi_up).
const std::map<std::pair<double, double>, double> kLambdaTable = {
    {{-0.05, 0.10}, 0.520}, {{-0.05, 0.15}, 1.050}, {{-0.05, 0.20}, 1.630},
    {{-0.05, 0.25}, 2.041}, {{-0.05, 0.30}, 2.508}, {{-0.10, 0.15}, 0.543},
    {{-0.10, 0.20}, 1.063}, {{-0.10, 0.25}, 1.619}, {{-0.10, 0.30}, 1.977},
    {{-0.15, 0.20}, 0.593}, {{-0.15, 0.25}, 1.117}, {{-0.15, 0.30}, 1.648},
    {{-0.20, 0.25}, 0.562}, {{-0.20, 0.30}, 1.000}, {{-0.25, 0.30}, 0.854},
};

const double kMeanReturnTable[6][6] = {
    // phi_up:      0.05    0.10    0.15    0.20    0.25    0.30
    /* -0.05 */ {0.017, 0.544, 1.098, 1.721, 2.188, 2.550},
    /* -0.10 */ {-0.558, 0.008, 0.551, 1.087, 1.666, 1.950},
    /* -0.15 */ {-1.388, -0.746, -0.022, 0.582, 1.144, 1.674},
    /* -0.20 */ {-2.181, -1.384, -0.719, -0.052, 0.462, 0.934},
    /* -0.25 */ {-2.990, -2.158, -1.433, -0.843, -0.190, 0.494},
    /* -0.30 */ {-4.003, -3.593, -2.563, -2.121, -1.056, -0.324},
};

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("dma: iid signs give the white-noise exponent") {
    Rng rng(616u);
    std::vector<double> signs(1 << 16);
    for (double& s : signs) s = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const DmaResult dma = dma_hurst(signs);
    CHECK(std::abs(dma.hurst - 0.5) < 0.03);
    CHECK(dma.stderr_ > 0.0);
}

TEST_CASE("dma: scales are log-spaced within the configured range") {
    Rng rng(2u);
    std::vector<double> noise(4096);
    for (double& v : noise) v = rng.normal();
    const DmaResult dma = dma_hurst(noise, 10, 400);
    CHECK(dma.scales.front() == 10);
    CHECK(dma.scales.back() <= 400);
    for (std::size_t i = 1; i < dma.scales.size(); ++i) CHECK(dma.scales[i] > dma.scales[i - 1]);
    for (double f : dma.fluctuations) CHECK(f > 0.0);
}

TEST_CASE("dma rejects short series") {
    std::vector<double> tiny(500, 1.0);
    CHECK_THROWS_AS(dma_hurst(tiny), std::runtime_error);
}

TEST_CASE("dma is scale invariant") {
    Rng rng(37u);
    std::vector<double> noise(1 << 13);
    for (double& v : noise) v = rng.normal();
    const DmaResult base = dma_hurst(noise);
    for (double& v : noise) v *= 17.5;
    const DmaResult scaled = dma_hurst(noise);
    CHECK(base.hurst == doctest::Approx(scaled.hurst).epsilon(1e-12));
}

TEST_CASE("returns and volatility") {
    const std::vector<double> constant(10, 100.0);
    const auto [r_const, v_const] = returns_and_volatility(constant);
    CHECK(r_const.size() == 9);
    for (double r : r_const) CHECK(r == 0.0);

    const std::vector<double> two{100.0, 105.0};
    const auto [r_two, v_two] = returns_and_volatility(two);
    CHECK(r_two[0] == doctest::Approx(std::log(1.05)));
    CHECK(v_two[0] == doctest::Approx(std::log(1.05)));

    CHECK_THROWS_AS(returns_and_volatility(std::vector<double>{100.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(returns_and_volatility(std::vector<double>{100.0}), std::invalid_argument);
}

TEST_CASE("returns telescope to the log price range") {
    Rng rng(99u);
    std::vector<double> mids;
    double p = 1000.0;
    for (int i = 0; i < 5000; ++i) {
        p *= std::exp(0.001 * rng.normal());
        mids.push_back(p);
    }
    const auto [returns, volatility] = returns_and_volatility(mids);
    double total = 0.0;
    for (double r : returns) total += r;
    CHECK(total == doctest::Approx(std::log(mids.back() / mids.front())).epsilon(1e-9));
}

TEST_CASE("power-law tail fit recovers synthetic Pareto exponents") {
    {
        const TailFit fit = fit_power_law_tail(pareto_samples(2.5, 1.0, 10000, 17u));
        CHECK(std::abs(fit.alpha - 2.5) < 0.1);
        CHECK(fit.x_min <= 1.5);
    }
    {
        const TailFit fit = fit_power_law_tail(pareto_samples(3.0, 1.0, 10000, 18u));
        CHECK(std::abs(fit.alpha - 3.0) < 0.12);
    }
}

TEST_CASE("tail fit is invariant under positive rescaling") {
    auto samples = pareto_samples(2.5, 1.0, 20000, 55u);
    const TailFit base = fit_power_law_tail(samples);
    for (double& s : samples) s *= 1000.0;
    const TailFit scaled = fit_power_law_tail(samples);
    CHECK(base.alpha == doctest::Approx(scaled.alpha).epsilon(1e-9));
    CHECK(scaled.x_min == doctest::Approx(base.x_min * 1000.0).epsilon(1e-9));
}

TEST_CASE("tail fit input validation") {
    CHECK_THROWS_AS(fit_power_law_tail(std::vector<double>(50, 1.0)), std::invalid_argument);
    std::vector<double> with_zero(200, 1.0);
    with_zero[5] = 0.0;
    CHECK_THROWS_AS(fit_power_law_tail(with_zero), std::invalid_argument);
}

TEST_CASE("divergence rate of a noiseless exponential is exact") {
    std::vector<double> prices;
    for (int t = 0; t < 2000; ++t) prices.push_back(10.0 * std::exp(0.001 * t));
    CHECK(divergence_rate(prices) == doctest::Approx(0.001).epsilon(1e-9));

    const std::vector<double> constant(500, 42.0);
    CHECK(divergence_rate(constant) == doctest::Approx(0.0));
}

TEST_CASE("half life crossing times") {
    std::vector<double> monotone;
    for (int t = 0; t <= 200; ++t) monotone.push_back(10.0 - 0.05 * t);  // crosses 5 at t=100
    CHECK(half_life(monotone, 10.0) == doctest::Approx(100.0));

    // Crossings at t=90 (down) and t=110 (up) average to 100.
    std::vector<double> wiggle(200, 6.0);
    for (int t = 90; t < 110; ++t) wiggle[static_cast<std::size_t>(t)] = 4.0;
    CHECK(half_life(wiggle, 10.0) == doctest::Approx(100.0));

    const std::vector<double> never(100, 8.0);
    CHECK_THROWS_AS(half_life(never, 10.0), std::runtime_error);
}

TEST_CASE("ols2 recovers a noiseless plane exactly") {
    std::vector<double> y, up, down;
    for (double u : {0.05, 0.10, 0.15, 0.20})
        for (double d : {0.05, 0.10, 0.15}) {
            up.push_back(u);
            down.push_back(d);
            y.push_back(1.0 + 2.0 * u - 3.0 * d);
        }
    const OlsFit fit = ols2(y, up, down);
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.coef_up == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.coef_down == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(fit.adj_r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ols2 residuals are orthogonal to the regressors") {
    Rng rng(21u);
    std::vector<double> y, up, down;
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform(), d = rng.uniform();
        up.push_back(u);
        down.push_back(d);
        y.push_back(0.3 - 1.1 * u + 0.7 * d + 0.05 * rng.normal());
    }
    const OlsFit fit = ols2(y, up, down);
    double dot_up = 0.0, dot_down = 0.0, dot_one = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - fit.intercept - fit.coef_up * up[i] - fit.coef_down * down[i];
        dot_up += e * up[i];
        dot_down += e * down[i];
        dot_one += e;
        scale += std::abs(y[i]);
    }
    CHECK(std::abs(dot_up) / scale < 1e-9);
    CHECK(std::abs(dot_down) / scale < 1e-9);
    CHECK(std::abs(dot_one) / scale < 1e-9);
}

TEST_CASE("ols2 rejects collinear designs and short inputs") {
    std::vector<double> y{1, 2, 3, 4}, up{0.1, 0.2, 0.3, 0.4}, down{0.2, 0.4, 0.6, 0.8};
    CHECK_THROWS_AS(ols2(y, up, down), std::invalid_argument);  // down = 2*up
    std::vector<double> tiny{1, 2, 3};
    CHECK_THROWS_AS(ols2(tiny, tiny, tiny), std::invalid_argument);
}

TEST_CASE("divergence-rate regression on the reference upper-triangle table") {
    std::vector<double> y, up, down;
    for (const auto& [key, lambda] : kLambdaTable) {
        down.push_back(std::abs(key.first));
        up.push_back(key.second);
        y.push_back(lambda * 1e-5);
    }
    const OlsFit fit = ols2(y, up, down);
    CHECK(std::abs(fit.coef_up - 9.91e-5) <= 0.01 * 9.91e-5);
    CHECK(std::abs(fit.coef_down + 9.19e-5) <= 0.01 * 9.19e-5);
    CHECK(fit.adj_r2 >= 0.97);
    CHECK(fit.p_values[1] < 1e-6);
    CHECK(fit.p_values[2] < 1e-6);
    CHECK(fit.p_values[0] > 0.5);  // intercept statistically zero
}

TEST_CASE("mean-return regression on the reference full-grid table") {
    const double phi_ups[6] = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    const double phi_downs[6] = {-0.05, -0.10, -0.15, -0.20, -0.25, -0.30};
    std::vector<double> y, up, down;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
            down.push_back(std::abs(phi_downs[r]));
            up.push_back(phi_ups[c]);
            y.push_back(kMeanReturnTable[r][c] * 1e-5);
        }
    const OlsFit fit = ols2(y, up, down);
    CHECK(fit.coef_up == doctest::Approx(1.2380e-4).epsilon(0.01));
    CHECK(fit.coef_down == doctest::Approx(-1.4147e-4).epsilon(0.01));
    CHECK(fit.adj_r2 > 0.97);
}

TEST_SUITE_END();
