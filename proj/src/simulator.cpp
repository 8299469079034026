#include "lobsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobsim {

namespace {

constexpr Shares kMinResting = 2;

void emit(const std::function<void(const OrderEvent&)>& sink, std::int64_t step, char kind,
          Ticks price, Shares size, std::uint64_t ref) {
    if (sink) sink(OrderEvent{step, kind, price, size, ref});
}

/// Re-seeds a side up to two resting orders near `reference`, staying inside
/// the band and never crossing the opposite best.
void ensure_min_depth(OrderBook& book, const PriceLimits& limits, Ticks reference,
                      Shares seed_size, std::uint64_t& next_id, std::int64_t step,
                      const std::function<void(const OrderEvent&)>& sink) {
    const Ticks ref = std::clamp(reference, limits.p_min, limits.p_max);
    while (book.order_count(Side::Buy) < 2) {
        Ticks anchor = ref;
        if (auto ask = book.best_ask()) anchor = std::min(anchor, *ask - 1);
        Ticks price = anchor - 1 - static_cast<Ticks>(book.order_count(Side::Buy));
        price = std::clamp(price, limits.p_min, std::max(limits.p_min, anchor));
        Order o{next_id++, Side::Buy, price, seed_size, step};
        book.insert_limit(o);
        emit(sink, step, 'B', o.price, o.size, o.id);
    }
    while (book.order_count(Side::Sell) < 2) {
        Ticks anchor = ref;
        if (auto bid = book.best_bid()) anchor = std::max(anchor, *bid + 1);
        Ticks price = anchor + 1 + static_cast<Ticks>(book.order_count(Side::Sell));
        price = std::clamp(price, std::min(limits.p_max, anchor), limits.p_max);
        Order o{next_id++, Side::Sell, price, seed_size, step};
        book.insert_limit(o);
        emit(sink, step, 'S', o.price, o.size, o.id);
    }
}

}  // namespace

void rollover_remove_out_of_band(OrderBook& book, const PriceLimits& limits) {
    book.remove_outside(limits.p_min, limits.p_max);
    // An ask at the exact floor implies an empty bid side (no bid can rest
    // below it); it would block the mandatory bid re-seed. Same for a bid at
    // the cap.
    while (book.order_count(Side::Sell) > 0 && *book.best_ask() <= limits.p_min)
        book.cancel_at(Side::Sell, 1, 1);
    while (book.order_count(Side::Buy) > 0 && *book.best_bid() >= limits.p_max)
        book.cancel_at(Side::Buy, 1, 1);
}

OrderBook seed_book(Ticks initial_price, Shares mean_size, std::uint64_t first_id,
                    std::int64_t step) {
    if (initial_price < 3) throw std::invalid_argument("seed book: initial price must be >= 3 ticks");
    if (mean_size < 1) throw std::invalid_argument("seed book: mean size must be >= 1");
    OrderBook book;
    std::uint64_t id = first_id;
    book.insert_limit({id++, Side::Buy, initial_price - 1, mean_size, step});
    book.insert_limit({id++, Side::Buy, initial_price - 2, mean_size, step});
    book.insert_limit({id++, Side::Sell, initial_price + 1, mean_size, step});
    book.insert_limit({id++, Side::Sell, initial_price + 2, mean_size, step});
    return book;
}

DayResult run_day(const ModelParams& params, DayContext& day, OrderBook& book,
                  std::uint64_t& next_order_id,
                  const std::function<void(const OrderEvent&)>& event_sink, bool record_trades) {
    DayResult result;
    const DayStreams streams = generate_day_streams(params, day.day_index);
    Rng flow_rng(Rng::derive(params.seed, static_cast<std::uint64_t>(day.day_index), 3));
    CancelStats cancel_stats;

    const std::int64_t base_step = day.day_index * params.steps_per_day;
    for (std::int64_t t = 0; t < params.steps_per_day; ++t) {
        const std::int64_t step = base_step + t;
        const Side side = streams.signs[static_cast<std::size_t>(t)] > 0 ? Side::Buy : Side::Sell;
        const double x = streams.rel_prices[static_cast<std::size_t>(t)];

        const Ticks bid = *book.best_bid();
        const Ticks ask = *book.best_ask();
        const Ticks price = price_from_relative(x, side, bid, ask, day.limits);
        const Shares size = generate_size(x, params.size_curve, flow_rng);

        Order order{next_order_id++, side, price, size, step};
        emit(event_sink, step, side == Side::Buy ? 'B' : 'S', price, size, order.id);
        ++result.placements;

        const bool crosses = side == Side::Buy ? price >= ask : price <= bid;
        if (crosses) {
            ExecutionResult exec = book.execute_marketable(order, kMinResting);
            result.discarded_shares += exec.discarded;
            if (!exec.trades.empty()) {
                const double mid = book.mid_price();
                day.mid_price_log.push_back(mid);
                result.mid_prices.push_back(mid);
                result.mid_steps.push_back(step);
                if (record_trades)
                    result.trades.insert(result.trades.end(), exec.trades.begin(), exec.trades.end());
            }
        } else {
            book.insert_limit(order);
        }

        if (auto target = maybe_cancel(params, book, flow_rng, &cancel_stats)) {
            const Order removed = book.cancel_at(target->side, target->level_index, target->queue_index);
            emit(event_sink, step, 'C', removed.price, removed.size, removed.id);
            ++result.cancellations;
        }
    }
    result.skipped_cancels = cancel_stats.skipped_min2;
    return result;
}

SimulationResult run_simulation(const ModelParams& params, const SimulationConfig& config) {
    params.validate();
    if (config.n_days < 1) throw std::invalid_argument("simulation: n_days must be >= 1");
    if (!(config.phi_up >= 0.0) || !(config.phi_down <= 0.0))
        throw std::invalid_argument("simulation: phi_up must be >= 0 and phi_down <= 0");

    SimulationResult result;
    const Shares seed_size =
        std::max<Shares>(1, std::llround(params.size_curve.mean_at(-0.5)));

    std::uint64_t next_id = 1;
    OrderBook book = seed_book(config.initial_price, seed_size, next_id, 0);
    next_id += 4;
    if (config.event_sink) {
        // Seed orders enter the event stream so that replay reconstructs the book.
        book.for_each_level(Side::Buy, [&](Ticks price, const std::deque<Order>& q) {
            for (const Order& o : q) emit(config.event_sink, 0, 'B', price, o.size, o.id);
        });
        book.for_each_level(Side::Sell, [&](Ticks price, const std::deque<Order>& q) {
            for (const Order& o : q) emit(config.event_sink, 0, 'S', price, o.size, o.id);
        });
    }

    Ticks close = config.initial_price;
    for (std::int64_t day_index = 0; day_index < config.n_days; ++day_index) {
        DayContext day;
        day.day_index = day_index;
        day.steps_per_day = params.steps_per_day;
        day.limits = roll_day(close, config.phi_up, config.phi_down);
        if (day.limits.p_max <= day.limits.p_min)
            throw std::runtime_error("simulation: price band collapsed (initial price too small)");
        if (day_index == 0 &&
            (config.initial_price - 2 < day.limits.p_min || config.initial_price + 2 > day.limits.p_max))
            throw std::invalid_argument("simulation: initial price too small for the limit band");

        const std::int64_t day_step = day_index * params.steps_per_day;
        if (day_index > 0) {
            // Resting orders outside the new band are unreachable; drop them
            // and restore minimum depth around the prior close.
            rollover_remove_out_of_band(book, day.limits);
        }
        ensure_min_depth(book, day.limits, close, seed_size, next_id, day_step, config.event_sink);

        result.day_boundaries.push_back(result.mid_prices.size());
        DayResult day_result = run_day(params, day, book, next_id, config.event_sink,
                                       config.record_trades);

        DayRecord record;
        record.day = day_index;
        record.p_min = day.limits.p_min;
        record.p_max = day.limits.p_max;
        if (day.mid_price_log.empty()) {
            record.close = close;  // no trades all day: carry the prior close
            record.no_trades = true;
        } else {
            record.close = closing_price_from_mids(day.mid_price_log, day.closing_window);
        }
        close = record.close;
        result.days.push_back(record);

        result.mid_prices.insert(result.mid_prices.end(), day_result.mid_prices.begin(),
                                 day_result.mid_prices.end());
        result.mid_steps.insert(result.mid_steps.end(), day_result.mid_steps.begin(),
                                day_result.mid_steps.end());
        if (config.record_trades)
            result.trades.insert(result.trades.end(), day_result.trades.begin(),
                                 day_result.trades.end());
        result.placements += day_result.placements;
        result.cancellations += day_result.cancellations;
        result.discarded_shares += day_result.discarded_shares;
        result.skipped_cancels += day_result.skipped_cancels;
    }
    result.final_book = std::move(book);
    return result;
}

}  // namespace lobsim
