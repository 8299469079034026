#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "lobsim/types.hpp"

namespace lobsim {

struct ExecutionResult {
    std::vector<Trade> trades;
    Shares executed{};
    Shares discarded{};
};

/// Price-time-priority limit order book. Bids are kept in descending price
/// order, asks ascending; within a price level orders queue FIFO by arrival.
/// The book is never crossed after any operation completes.
///
/// Single-writer: one book instance is owned by one simulation thread.
class OrderBook {
public:
    /// Appends a non-marketable order to the FIFO queue at its price.
    /// Throws std::invalid_argument if the order would cross the opposite
    /// best (the caller must route marketable orders to execute_marketable).
    void insert_limit(const Order& order);

    /// Executes a marketable order against the opposite side, walking levels
    /// in price priority and FIFO within a level. Every fill happens at the
    /// resting order's price. Execution stops once filling another whole
    /// resting order would leave fewer than `min_resting` orders on the
    /// opposite side; any unexecuted remainder (for that reason or because
    /// no remaining level crosses the order's price) is discarded.
    ExecutionResult execute_marketable(const Order& order, Shares min_resting);

    /// Removes and returns the order at (level_index, queue_index), both
    /// 1-based: level 1 is the best price of the side, queue position 1 the
    /// earliest arrival. Empty levels are erased. Throws std::out_of_range
    /// for invalid indices.
    Order cancel_at(Side side, std::size_t level_index, std::size_t queue_index);

    /// (best_bid + best_ask) / 2, exact to half a tick.
    /// Throws std::runtime_error if either side is empty.
    double mid_price() const;

    std::optional<Ticks> best_bid() const;
    std::optional<Ticks> best_ask() const;

    std::size_t level_count(Side side) const;
    std::size_t order_count(Side side) const;
    std::size_t queue_length(Side side, std::size_t level_index) const;  // 1-based level
    Shares resting_shares(Side side) const;
    bool empty() const { return bids_.empty() && asks_.empty(); }

    /// Removes every resting order whose price lies outside [p_min, p_max]
    /// and returns them (used at daily limit rollover).
    std::vector<Order> remove_outside(Ticks p_min, Ticks p_max);

    /// Visits levels best-first: fn(price, queue). Queue is in FIFO order.
    void for_each_level(Side side,
                        const std::function<void(Ticks, const std::deque<Order>&)>& fn) const;

    /// CSV snapshot `side,price_ticks,queue_index,order_id,size,arrival_step`,
    /// levels best-first, bids before asks.
    void write_snapshot_csv(std::ostream& os) const;

private:
    using BidMap = std::map<Ticks, std::deque<Order>, std::greater<Ticks>>;
    using AskMap = std::map<Ticks, std::deque<Order>>;

    BidMap bids_;
    AskMap asks_;
    std::size_t bid_orders_ = 0, ask_orders_ = 0;
    Shares bid_shares_ = 0, ask_shares_ = 0;

    template <class Map>
    ExecutionResult execute_against(Map& levels, std::size_t& count, Shares& shares,
                                    const Order& order, Shares min_resting, bool taker_is_buy);
    template <class Map>
    Order cancel_in(Map& levels, std::size_t& count, Shares& shares,
                    std::size_t level_index, std::size_t queue_index) const;
};

}  // namespace lobsim
