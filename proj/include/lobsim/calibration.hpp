#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lobsim/orderflow.hpp"
#include "lobsim/simulator.hpp"

namespace lobsim {

/// Input to parameter estimation: a raw order-event stream plus the daily
/// price bands needed to reconstruct relative prices, and the step-to-day
/// mapping (day = timestamp / steps_per_day).
struct CalibrationInput {
    std::vector<OrderEvent> events;
    std::vector<DayRecord> daily;  // p_min/p_max per day, day-indexed from 0
    std::int64_t steps_per_day = 20000;
};

/// Estimates ModelParams by replaying the event stream through the order
/// book: Hurst exponents of order directions and relative prices via DMA,
/// the relative-price distribution, the size-vs-relative-price curve
/// (50 equi-population bins), the cancellation rate, and the cancellation
/// level/position distributions per side. Degenerate at-limit relative
/// prices are skipped. Throws std::runtime_error naming the offending event
/// index when the stream does not reconstruct a valid book.
ModelParams estimate_params(const CalibrationInput& input);

/// Least-squares fit of the renormalized log-normal density to a log-spaced
/// histogram of samples in (0, 1]. Returns (mu, sigma). Requires >= 1000
/// samples.
std::pair<double, double> fit_lognormal_hist(const std::vector<double>& samples, int n_bins = 50);

/// Least-squares fit of the queue-position density (1 - e^{gamma Y}) / z to
/// a histogram of samples in (0, 1]. Returns gamma < 0. Requires >= 1000
/// samples. A flat (uniform-like) histogram drives gamma to the lower
/// search bound (reported as-is; values below -100 mean "flat").
double fit_exp_position_hist(const std::vector<double>& samples, int n_bins = 50);

}  // namespace lobsim
