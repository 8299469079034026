#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lobsim/order_book.hpp"
#include "lobsim/orderflow.hpp"
#include "lobsim/pricing.hpp"
#include "lobsim/types.hpp"

namespace lobsim {

/// One raw order-flow event, as written to / read from event CSV streams.
/// kind: 'B' buy placement, 'S' sell placement, 'C' cancellation (order_ref
/// names the cancelled order).
struct OrderEvent {
    std::int64_t timestamp{};  // global step index
    char kind{};
    Ticks price{};
    Shares size{};
    std::uint64_t order_ref{};
};

struct SimulationConfig {
    std::int64_t n_days = 250;
    double phi_up = 0.10;
    double phi_down = -0.10;
    Ticks initial_price = 1000;  // 10.00 currency units
    bool record_trades = false;
    std::function<void(const OrderEvent&)> event_sink;  // optional
};

struct DayRecord {
    std::int64_t day{};
    Ticks close{};
    Ticks p_min{};
    Ticks p_max{};
    bool no_trades{};  // close carried over from the prior day
};

struct SimulationResult {
    std::vector<double> mid_prices;       // ticks, exact halves; one entry per transaction event
    std::vector<std::int64_t> mid_steps;  // global step of each recorded mid
    std::vector<std::size_t> day_boundaries;  // index into mid_prices where each day starts
    std::vector<DayRecord> days;
    std::vector<Trade> trades;  // populated only when record_trades
    OrderBook final_book;
    std::int64_t placements{};
    std::int64_t cancellations{};
    std::int64_t discarded_shares{};
    std::int64_t skipped_cancels{};
};

/// Four resting orders bracketing the initial price: bids at p0-1, p0-2 and
/// asks at p0+1, p0+2, each of size mean_size.
OrderBook seed_book(Ticks initial_price, Shares mean_size, std::uint64_t first_id = 1,
                    std::int64_t step = 0);

/// Day-rollover cleanup: removes resting orders outside [p_min, p_max] and,
/// when one side is entirely gone, clears opposite-side orders sitting
/// exactly on the band edge that would leave no room to re-seed it.
/// Shared between the simulator and event-stream replay.
void rollover_remove_out_of_band(OrderBook& book, const PriceLimits& limits);

struct DayResult {
    std::vector<double> mid_prices;
    std::vector<std::int64_t> mid_steps;
    std::vector<Trade> trades;
    std::int64_t placements{};
    std::int64_t cancellations{};
    std::int64_t discarded_shares{};
    std::int64_t skipped_cancels{};
};

/// Runs one trading day of order placements against the book: price each
/// (sign, relative price) draw, route by actual crossing, record the mid
/// after every transaction, and apply at most one cancellation per step.
DayResult run_day(const ModelParams& params, DayContext& day, OrderBook& book,
                  std::uint64_t& next_order_id,
                  const std::function<void(const OrderEvent&)>& event_sink = {},
                  bool record_trades = false);

/// Chains run_day over n_days with limit rollover in between. The book is
/// carried overnight; resting orders outside the new band are removed and
/// each side is re-seeded up to two orders if it fell below. Deterministic
/// for a fixed (params.seed, config).
SimulationResult run_simulation(const ModelParams& params, const SimulationConfig& config);

}  // namespace lobsim
