#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lobsim {

struct DmaResult {
    std::vector<std::int64_t> scales;
    std::vector<double> fluctuations;
    double hurst{};
    double stderr_{};
};

/// Detrending-moving-average estimate of the Hurst exponent of a noise-like
/// series. The mean-subtracted series is integrated to a profile; at each
/// scale the RMS residual of the profile against its moving average gives
/// F(scale), and H is the log-log slope. The window position parameter
/// theta runs from 0 (fully backward) to 1 (fully forward); the centered
/// window theta = 0.5 is the default, being unbiased across H on series of
/// this length (the backward window underestimates large H once the series
/// mean is removed). Scales are log-spaced with `points_per_decade` points
/// from scale_min to scale_max (default n/10). Throws std::runtime_error
/// when the series is shorter than 100 * scale_min.
DmaResult dma_hurst(std::span<const double> series, std::int64_t scale_min = 10,
                    std::int64_t scale_max = 0, int points_per_decade = 20, double theta = 0.5);

/// Log returns R(t) = ln(m(t)/m(t-1)) and volatilities V = |R|.
/// Throws std::invalid_argument on non-positive mids or length < 2.
std::pair<std::vector<double>, std::vector<double>> returns_and_volatility(
    std::span<const double> mids);

struct TailFit {
    double alpha{};  // density exponent, > 1
    double x_min{};
    double ks{};
};

/// Power-law tail fit: for each candidate x_min (distinct sample values,
/// quantile-thinned to at most 250) the tail exponent is the maximum-
/// likelihood estimate 1 + n_tail / sum(ln(x_i/x_min)) and the candidate
/// minimizing the KS distance between the empirical tail and the fitted
/// CDF wins. Requires >= 100 strictly positive samples and at least one
/// candidate with >= 10 tail points.
TailFit fit_power_law_tail(std::vector<double> samples);

/// OLS slope of ln(p_t) against t over the trailing (1 - fit_start_frac)
/// fraction of the trajectory. Requires positive prices.
double divergence_rate(std::span<const double> prices, double fit_start_frac = 0.1);

/// Mean of the step indices where the trajectory crosses p_ref / 2 (sign
/// change or exact hit). Throws std::runtime_error if it never crosses.
double half_life(std::span<const double> prices, double p_ref);

struct OlsFit {
    double intercept{};
    double coef_up{};
    double coef_down{};
    double p_values[3]{};  // intercept, coef_up, coef_down
    double adj_r2{};
    double mse{};
};

/// Two-regressor OLS with intercept: y = b0 + b1 * phi_up + b2 * abs_phi_down.
/// Two-sided t-test p-values, adjusted R^2, and MSE = SSE/(n-3). Throws
/// std::invalid_argument with fewer than 4 observations or a collinear design.
OlsFit ols2(std::span<const double> y, std::span<const double> phi_up,
            std::span<const double> abs_phi_down);

double mean_of(std::span<const double> values);

}  // namespace lobsim
