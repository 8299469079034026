#include "lobsim/order_book.hpp"

#include <stdexcept>

namespace lobsim {

void OrderBook::insert_limit(const Order& order) {
    if (order.size < 1) throw std::invalid_argument("order size must be >= 1");
    if (order.price < 1) throw std::invalid_argument("order price must be >= 1 tick");
    if (order.side == Side::Buy) {
        if (auto ask = best_ask(); ask && order.price >= *ask)
            throw std::invalid_argument("buy limit would cross the book");
        bids_[order.price].push_back(order);
        ++bid_orders_;
        bid_shares_ += order.size;
    } else {
        if (auto bid = best_bid(); bid && order.price <= *bid)
            throw std::invalid_argument("sell limit would cross the book");
        asks_[order.price].push_back(order);
        ++ask_orders_;
        ask_shares_ += order.size;
    }
}

template <class Map>
ExecutionResult OrderBook::execute_against(Map& levels, std::size_t& count, Shares& shares,
                                           const Order& order, Shares min_resting,
                                           bool taker_is_buy) {
    ExecutionResult result;
    Shares remaining = order.size;
    while (remaining > 0 && !levels.empty()) {
        auto level = levels.begin();
        const Ticks level_price = level->first;
        const bool crosses = taker_is_buy ? order.price >= level_price : order.price <= level_price;
        if (!crosses) break;
        auto& queue = level->second;
        Order& maker = queue.front();
        if (remaining >= maker.size) {
            // Would consume the resting order entirely; blocked if that
            // drops the side below min_resting.
            if (static_cast<Shares>(count) - 1 < min_resting) break;
            result.trades.push_back(
                {maker.id, order.id, maker.price, maker.size, order.arrival_step});
            remaining -= maker.size;
            result.executed += maker.size;
            shares -= maker.size;
            --count;
            queue.pop_front();
            if (queue.empty()) levels.erase(level);
        } else {
            result.trades.push_back({maker.id, order.id, maker.price, remaining, order.arrival_step});
            maker.size -= remaining;
            shares -= remaining;
            result.executed += remaining;
            remaining = 0;
        }
    }
    result.discarded = remaining;
    return result;
}

ExecutionResult OrderBook::execute_marketable(const Order& order, Shares min_resting) {
    if (order.size < 1) throw std::invalid_argument("order size must be >= 1");
    if (min_resting < 0) throw std::invalid_argument("min_resting must be >= 0");
    if (order.side == Side::Buy) {
        auto ask = best_ask();
        if (!ask || order.price < *ask)
            throw std::invalid_argument("order is not marketable");
        return execute_against(asks_, ask_orders_, ask_shares_, order, min_resting, true);
    }
    auto bid = best_bid();
    if (!bid || order.price > *bid)
        throw std::invalid_argument("order is not marketable");
    return execute_against(bids_, bid_orders_, bid_shares_, order, min_resting, false);
}

template <class Map>
Order OrderBook::cancel_in(Map& levels, std::size_t& count, Shares& shares,
                           std::size_t level_index, std::size_t queue_index) const {
    if (level_index < 1 || level_index > levels.size())
        throw std::out_of_range("level index out of range");
    auto it = levels.begin();
    std::advance(it, level_index - 1);
    auto& queue = it->second;
    if (queue_index < 1 || queue_index > queue.size())
        throw std::out_of_range("queue index out of range");
    Order removed = queue[queue_index - 1];
    queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(queue_index - 1));
    if (queue.empty()) levels.erase(it);
    --count;
    shares -= removed.size;
    return removed;
}

Order OrderBook::cancel_at(Side side, std::size_t level_index, std::size_t queue_index) {
    if (side == Side::Buy)
        return cancel_in(bids_, bid_orders_, bid_shares_, level_index, queue_index);
    return cancel_in(asks_, ask_orders_, ask_shares_, level_index, queue_index);
}

double OrderBook::mid_price() const {
    auto bid = best_bid();
    auto ask = best_ask();
    if (!bid || !ask) throw std::runtime_error("mid price undefined on a one-sided book");
    return 0.5 * static_cast<double>(*bid + *ask);
}

std::optional<Ticks> OrderBook::best_bid() const {
    if (bids_.empty()) return std::nullopt;
    return bids_.begin()->first;
}

std::optional<Ticks> OrderBook::best_ask() const {
    if (asks_.empty()) return std::nullopt;
    return asks_.begin()->first;
}

std::size_t OrderBook::level_count(Side side) const {
    return side == Side::Buy ? bids_.size() : asks_.size();
}

std::size_t OrderBook::order_count(Side side) const {
    return side == Side::Buy ? bid_orders_ : ask_orders_;
}

std::size_t OrderBook::queue_length(Side side, std::size_t level_index) const {
    const auto visit = [&](const auto& levels) -> std::size_t {
        if (level_index < 1 || level_index > levels.size())
            throw std::out_of_range("level index out of range");
        auto it = levels.begin();
        std::advance(it, level_index - 1);
        return it->second.size();
    };
    return side == Side::Buy ? visit(bids_) : visit(asks_);
}

Shares OrderBook::resting_shares(Side side) const {
    return side == Side::Buy ? bid_shares_ : ask_shares_;
}

std::vector<Order> OrderBook::remove_outside(Ticks p_min, Ticks p_max) {
    std::vector<Order> removed;
    const auto sweep = [&](auto& levels, std::size_t& count, Shares& shares) {
        for (auto it = levels.begin(); it != levels.end();) {
            if (it->first < p_min || it->first > p_max) {
                for (const Order& o : it->second) {
                    removed.push_back(o);
                    --count;
                    shares -= o.size;
                }
                it = levels.erase(it);
            } else {
                ++it;
            }
        }
    };
    sweep(bids_, bid_orders_, bid_shares_);
    sweep(asks_, ask_orders_, ask_shares_);
    return removed;
}

void OrderBook::for_each_level(
    Side side, const std::function<void(Ticks, const std::deque<Order>&)>& fn) const {
    if (side == Side::Buy) {
        for (const auto& [price, queue] : bids_) fn(price, queue);
    } else {
        for (const auto& [price, queue] : asks_) fn(price, queue);
    }
}

void OrderBook::write_snapshot_csv(std::ostream& os) const {
    os << "side,price_ticks,queue_index,order_id,size,arrival_step\n";
    const auto dump = [&](char tag, const auto& levels) {
        for (const auto& [price, queue] : levels) {
            std::size_t qi = 1;
            for (const Order& o : queue) {
                os << tag << ',' << price << ',' << qi++ << ',' << o.id << ',' << o.size << ','
                   << o.arrival_step << '\n';
            }
        }
    };
    dump('B', bids_);
    dump('S', asks_);
}

}  // namespace lobsim
