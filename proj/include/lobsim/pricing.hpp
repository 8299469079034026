#pragma once

#include <optional>
#include <vector>

#include "lobsim/types.hpp"

namespace lobsim {

/// Daily valid price band [p_min, p_max] derived from the prior close and
/// the limit fractions phi_up >= 0 >= phi_down.
struct PriceLimits {
    Ticks p_max{};
    Ticks p_min{};
    double phi_up{};
    double phi_down{};
    double tick{kTickSize};
};

struct DayContext {
    std::int64_t day_index{};
    PriceLimits limits;
    std::int64_t steps_per_day{};
    std::vector<double> mid_price_log;  // mid-prices in ticks, exact halves
    int closing_window{100};
};

/// Round-half-up of price * factor in exact integer arithmetic (factor
/// quantized to 1e-6).
Ticks scale_round_half_up(Ticks price, double factor);

/// Maps a relative price x in [-1, 1] to an absolute tick price. Buy orders
/// are anchored at the best ask, sells at the best bid; x >= 0 reaches
/// toward the aggressive limit, x < 0 away from it. Zero-width brackets at
/// a limit collapse to that limit. The result is rounded to the nearest
/// tick (half-up) and clamped into [p_min, p_max].
Ticks price_from_relative(double x, Side side, Ticks best_bid, Ticks best_ask,
                          const PriceLimits& limits);

/// Exact inverse of the corresponding pricing branch. Returns nullopt when
/// the branch is degenerate (bracket width zero at a price limit).
std::optional<double> relative_from_price(Ticks price, Side side, bool is_marketable,
                                          Ticks best_bid, Ticks best_ask,
                                          const PriceLimits& limits);

/// Next day's price band from the closing price: p_max = <(1+phi_up) p_c>,
/// p_min = max(1 tick, <(1+phi_down) p_c>), rounding half-up.
PriceLimits roll_day(Ticks closing_price, double phi_up, double phi_down);

/// Mean of the last min(window, len) mid-prices, rounded half-up to a tick.
/// Exact integer arithmetic on half-ticks. Throws std::runtime_error on an
/// empty log.
Ticks closing_price_from_mids(const std::vector<double>& mid_log, int window = 100);

/// The tick-induced price floor under a down-dominant limit: the largest
/// tick multiple B with 0.005/|phi_down| < B <= 0.015/|phi_down|, in
/// currency units. Requires phi_down < 0.
double lower_bound_price(double phi_down);

}  // namespace lobsim
