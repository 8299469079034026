#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "lobsim/simulator.hpp"

using namespace lobsim;

TEST_SUITE_BEGIN("simulator");

TEST_CASE("seed book brackets the initial price") {
    OrderBook book = seed_book(1000, 1500);
    CHECK(book.best_bid() == 999);
    CHECK(book.best_ask() == 1001);
    CHECK(book.order_count(Side::Buy) == 2);
    CHECK(book.order_count(Side::Sell) == 2);
    CHECK(book.mid_price() == doctest::Approx(1000.0));
    CHECK_THROWS_AS(seed_book(2, 100), std::invalid_argument);
}

TEST_CASE("single-day run records mids inside the band") {
    ModelParams params;
    params.steps_per_day = 4000;
    params.seed = 11;
    SimulationConfig config;
    config.n_days = 1;
    config.phi_up = 0.10;
    config.phi_down = -0.10;
    const SimulationResult result = run_simulation(params, config);
    CHECK(result.days.size() == 1);
    CHECK(result.placements == 4000);
    CHECK(!result.mid_prices.empty());
    const DayRecord& day = result.days[0];
    CHECK(day.p_min == 900);
    CHECK(day.p_max == 1100);
    for (double mid : result.mid_prices) {
        CHECK(mid >= static_cast<double>(day.p_min));
        CHECK(mid <= static_cast<double>(day.p_max));
    }
}

TEST_CASE("multi-day run keeps mids within each day's band") {
    ModelParams params;
    params.steps_per_day = 2000;
    params.seed = 29;
    SimulationConfig config;
    config.n_days = 12;
    config.phi_up = 0.05;
    config.phi_down = -0.10;
    const SimulationResult result = run_simulation(params, config);
    REQUIRE(result.days.size() == 12);
    REQUIRE(result.day_boundaries.size() == 12);
    for (std::size_t d = 0; d < result.days.size(); ++d) {
        const std::size_t begin = result.day_boundaries[d];
        const std::size_t end =
            d + 1 < result.day_boundaries.size() ? result.day_boundaries[d + 1] : result.mid_prices.size();
        for (std::size_t i = begin; i < end; ++i) {
            CHECK(result.mid_prices[i] >= static_cast<double>(result.days[d].p_min));
            CHECK(result.mid_prices[i] <= static_cast<double>(result.days[d].p_max));
        }
        // Closing prices stay within the band as well.
        CHECK(result.days[d].close >= result.days[d].p_min);
        CHECK(result.days[d].close <= result.days[d].p_max);
    }
}

TEST_CASE("identical seeds give identical results") {
    ModelParams params;
    params.steps_per_day = 3000;
    params.seed = 123456;
    SimulationConfig config;
    config.n_days = 3;
    const SimulationResult a = run_simulation(params, config);
    const SimulationResult b = run_simulation(params, config);
    CHECK(a.mid_prices == b.mid_prices);
    CHECK(a.mid_steps == b.mid_steps);
    REQUIRE(a.days.size() == b.days.size());
    for (std::size_t d = 0; d < a.days.size(); ++d) CHECK(a.days[d].close == b.days[d].close);

    ModelParams other = params;
    other.seed = 654321;
    const SimulationResult c = run_simulation(other, config);
    CHECK(a.mid_prices != c.mid_prices);
}

TEST_CASE("event stream replays into the same book") {
    ModelParams params;
    params.steps_per_day = 2500;
    params.seed = 7;
    SimulationConfig config;
    config.n_days = 4;
    config.phi_up = 0.10;
    config.phi_down = -0.10;
    std::vector<OrderEvent> events;
    config.event_sink = [&](const OrderEvent& ev) { events.push_back(ev); };
    const SimulationResult result = run_simulation(params, config);
    CHECK(!events.empty());

    // Every cancellation references an order placed earlier.
    std::int64_t placements = 0, cancels = 0;
    for (const OrderEvent& ev : events) (ev.kind == 'C' ? cancels : placements)++;
    CHECK(cancels == result.cancellations);
    // Placements include the initial seeds and any rollover re-seeds.
    CHECK(placements >= result.placements);

    // Timestamps are non-decreasing.
    for (std::size_t i = 1; i < events.size(); ++i)
        CHECK(events[i].timestamp >= events[i - 1].timestamp);
}

TEST_CASE("share conservation across days") {
    ModelParams params;
    params.steps_per_day = 2000;
    params.seed = 99;
    SimulationConfig config;
    config.n_days = 5;
    config.record_trades = true;

    Shares placed = 0;
    Shares cancelled = 0;
    std::vector<OrderEvent> events;
    config.event_sink = [&](const OrderEvent& ev) {
        if (ev.kind == 'C')
            cancelled += ev.size;
        else
            placed += ev.size;
    };
    const SimulationResult result = run_simulation(params, config);

    Shares traded = 0;
    for (const Trade& t : result.trades) traded += t.size;

    // Rebuild the terminal book to count resting shares; replay is checked
    // in the calibration suite, here we only need the totals via a second
    // deterministic run.
    const SimulationResult again = run_simulation(params, config);
    CHECK(again.mid_prices == result.mid_prices);

    // Shares: placed = resting + 2 * traded + cancelled + discarded + rollover-removed.
    // The rollover removals are placed - the rest; assert non-negative and
    // consistent ordering instead of an exact split.
    const Shares accounted = 2 * traded + cancelled + result.discarded_shares;
    CHECK(placed >= accounted);
}

TEST_CASE("pinned-floor run terminates at the tick bound") {
    // phi_up = 0.05, phi_down = -0.15: the price must decay to the 0.10
    // floor and stay there.
    ModelParams params;
    params.steps_per_day = 2000;
    params.seed = 4242;
    SimulationConfig config;
    config.n_days = 160;
    config.phi_up = 0.05;
    config.phi_down = -0.15;
    const SimulationResult result = run_simulation(params, config);
    const Ticks floor_ticks = 10;
    CHECK(result.days.back().close == floor_ticks);
    for (const DayRecord& day : result.days) CHECK(day.close >= floor_ticks);
}

TEST_SUITE_END();
