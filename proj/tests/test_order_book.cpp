#include <doctest.h>

#include <map>
#include <sstream>
#include <stdexcept>

#include "lobsim/order_book.hpp"
#include "lobsim/rng.hpp"

using namespace lobsim;

namespace {

Order make(std::uint64_t id, Side side, Ticks price, Shares size, std::int64_t step = 0) {
    return Order{id, side, price, size, step};
}

}  // namespace

TEST_SUITE_BEGIN("lob");

TEST_CASE("insert into empty side creates the level") {
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 100, 1));
    CHECK(book.level_count(Side::Sell) == 1);
    CHECK(book.best_ask() == 1001);
    CHECK(book.queue_length(Side::Sell, 1) == 1);
}

TEST_CASE("same-price orders queue FIFO by arrival") {
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 10, 5));
    book.insert_limit(make(2, Side::Sell, 1001, 20, 7));
    Order first = book.cancel_at(Side::Sell, 1, 1);
    CHECK(first.arrival_step == 5);
    Order second = book.cancel_at(Side::Sell, 1, 1);
    CHECK(second.arrival_step == 7);
}

TEST_CASE("crossing insert is rejected") {
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 100));
    CHECK_THROWS_AS(book.insert_limit(make(2, Side::Buy, 1001, 100)), std::invalid_argument);
    CHECK_THROWS_AS(book.insert_limit(make(3, Side::Buy, 1500, 100)), std::invalid_argument);
}

TEST_CASE("exact fill at one level") {
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 100));
    book.insert_limit(make(2, Side::Sell, 1002, 100));
    book.insert_limit(make(3, Side::Sell, 1003, 100));
    auto result = book.execute_marketable(make(10, Side::Buy, 1001, 100), 2);
    REQUIRE(result.trades.size() == 1);
    CHECK(result.trades[0].price == 1001);
    CHECK(result.trades[0].size == 100);
    CHECK(result.trades[0].maker_id == 1);
    CHECK(result.executed == 100);
    CHECK(result.discarded == 0);
    CHECK(book.best_ask() == 1002);
}

TEST_CASE("marketable order walks levels in price priority with min-resting stop") {
    // asks: 1001 -> [100, 100], 1002 -> [100, 100, 100]; buy 300 fills
    // 100+100 @1001 then 100 @1002 leaving two resting orders.
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 100, 1));
    book.insert_limit(make(2, Side::Sell, 1001, 100, 2));
    book.insert_limit(make(3, Side::Sell, 1002, 100, 3));
    book.insert_limit(make(4, Side::Sell, 1002, 100, 4));
    book.insert_limit(make(5, Side::Sell, 1002, 100, 5));
    auto result = book.execute_marketable(make(10, Side::Buy, 1002, 300), 2);
    REQUIRE(result.trades.size() == 3);
    CHECK(result.trades[0].maker_id == 1);
    CHECK(result.trades[0].price == 1001);
    CHECK(result.trades[1].maker_id == 2);
    CHECK(result.trades[1].price == 1001);
    CHECK(result.trades[2].maker_id == 3);
    CHECK(result.trades[2].price == 1002);
    CHECK(result.executed == 300);
    CHECK(result.discarded == 0);
    CHECK(book.order_count(Side::Sell) == 2);
}

TEST_CASE("huge order is capped, remainder discarded, two orders survive") {
    OrderBook book;
    for (std::uint64_t i = 0; i < 5; ++i)
        book.insert_limit(make(i + 1, Side::Sell, 1001 + static_cast<Ticks>(i), 100, static_cast<std::int64_t>(i)));
    auto result = book.execute_marketable(make(10, Side::Buy, 2000, 1000000000), 2);
    CHECK(result.executed == 300);
    CHECK(result.discarded == 1000000000 - 300);
    CHECK(book.order_count(Side::Sell) == 2);
}

TEST_CASE("positional cancel addresses level then queue") {
    OrderBook book;
    book.insert_limit(make(1, Side::Sell, 1001, 10));
    book.insert_limit(make(2, Side::Sell, 1003, 20));
    Order removed = book.cancel_at(Side::Sell, 2, 1);
    CHECK(removed.price == 1003);
    CHECK(book.level_count(Side::Sell) == 1);

    SUBCASE("single-order level disappears") {
        Order last = book.cancel_at(Side::Sell, 1, 1);
        CHECK(last.price == 1001);
        CHECK(book.level_count(Side::Sell) == 0);
    }
    SUBCASE("out-of-range level errors") {
        CHECK_THROWS_AS(book.cancel_at(Side::Sell, 5, 1), std::out_of_range);
        CHECK_THROWS_AS(book.cancel_at(Side::Sell, 1, 9), std::out_of_range);
    }
}

TEST_CASE("mid price") {
    OrderBook book;
    book.insert_limit(make(1, Side::Buy, 999, 10));
    book.insert_limit(make(2, Side::Sell, 1001, 10));
    CHECK(book.mid_price() == doctest::Approx(1000.0));
    OrderBook one_sided;
    one_sided.insert_limit(make(3, Side::Buy, 999, 10));
    CHECK_THROWS_AS(one_sided.mid_price(), std::runtime_error);
}

TEST_CASE("half-tick mid allowed") {
    OrderBook book;
    book.insert_limit(make(1, Side::Buy, 999, 10));
    book.insert_limit(make(2, Side::Sell, 1000, 10));
    CHECK(book.mid_price() == doctest::Approx(999.5));
}

TEST_CASE("snapshot csv lists levels best-first") {
    OrderBook book;
    book.insert_limit(make(1, Side::Buy, 998, 5, 1));
    book.insert_limit(make(2, Side::Buy, 999, 6, 2));
    book.insert_limit(make(3, Side::Sell, 1001, 7, 3));
    std::ostringstream os;
    book.write_snapshot_csv(os);
    CHECK(os.str() ==
          "side,price_ticks,queue_index,order_id,size,arrival_step\n"
          "B,999,1,2,6,2\n"
          "B,998,1,1,5,1\n"
          "S,1001,1,3,7,3\n");
}

// Property test: random event stream preserving share conservation,
// no-cross, price-time priority, and the min-resting floor.
TEST_CASE("randomized event stream holds the book invariants") {
    Rng rng(20240811);
    OrderBook book;
    std::uint64_t next_id = 1;
    std::int64_t step = 0;

    Shares inserted = 0, filled = 0, cancelled = 0, discarded = 0;
    // Seed both sides so marketable orders have something to hit.
    for (int i = 0; i < 3; ++i) {
        Order b = make(next_id++, Side::Buy, 995 - i, 50, step++);
        Order a = make(next_id++, Side::Sell, 1005 + i, 50, step++);
        book.insert_limit(b);
        book.insert_limit(a);
        inserted += b.size + a.size;
    }

    const int kEvents = 200000;
    for (int e = 0; e < kEvents; ++e) {
        const double roll = rng.uniform();
        const Side side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
        const auto bid = book.best_bid();
        const auto ask = book.best_ask();

        if (roll < 0.55) {
            // Passive limit order near the touch.
            const Ticks ref = side == Side::Buy ? (bid ? *bid : 1000) : (ask ? *ask : 1000);
            Ticks price = ref + static_cast<Ticks>(rng.uniform() * 5) * (side == Side::Buy ? -1 : +1);
            if (side == Side::Buy && ask && price >= *ask) price = *ask - 1;
            if (side == Side::Sell && bid && price <= *bid) price = *bid + 1;
            if (price < 1) price = 1;
            Order o = make(next_id++, side, price, 1 + static_cast<Shares>(rng.uniform() * 100), step++);
            book.insert_limit(o);
            inserted += o.size;
        } else if (roll < 0.8) {
            // Marketable order.
            const auto opp = side == Side::Buy ? ask : bid;
            if (!opp) continue;
            const Ticks price = *opp + (side == Side::Buy ? 2 : -2);
            if (price < 1) continue;
            Order o = make(next_id++, side, price, 1 + static_cast<Shares>(rng.uniform() * 150), step++);
            auto result = book.execute_marketable(o, 2);
            inserted += o.size;
            filled += result.executed;
            discarded += result.discarded;

            // Price-time priority along this execution.
            for (std::size_t i = 1; i < result.trades.size(); ++i) {
                const Trade& prev = result.trades[i - 1];
                const Trade& curr = result.trades[i];
                if (side == Side::Buy)
                    CHECK(curr.price >= prev.price);
                else
                    CHECK(curr.price <= prev.price);
                if (curr.price == prev.price) CHECK(curr.maker_id > prev.maker_id);
            }
            CHECK(book.order_count(opposite(side)) >= 2);
        } else {
            // Positional cancel, skipped when the side is at the floor.
            if (book.order_count(side) <= 2) continue;
            const std::size_t levels = book.level_count(side);
            const std::size_t level = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(levels));
            const std::size_t qlen = book.queue_length(side, level);
            const std::size_t qi = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(qlen));
            Order removed = book.cancel_at(side, level, qi);
            cancelled += removed.size;
        }

        if (const auto b2 = book.best_bid(), a2 = book.best_ask(); b2 && a2) CHECK(*b2 < *a2);
    }

    const Shares resting = book.resting_shares(Side::Buy) + book.resting_shares(Side::Sell);
    // Fills consume shares from both the taker and the maker side.
    CHECK(inserted == resting + 2 * filled + cancelled + discarded);
}

TEST_SUITE_END();
