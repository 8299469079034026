#pragma once

#include <cstdint>

namespace lobsim {

// Prices are integer tick counts everywhere inside the engine; one tick is
// 0.01 currency units. Conversion to currency happens only at I/O.
using Ticks = std::int64_t;
using Shares = std::int64_t;

constexpr double kTickSize = 0.01;

enum class Side : std::uint8_t { Buy = 0, Sell = 1 };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline int sign_of(Side s) { return s == Side::Buy ? +1 : -1; }

struct Order {
    std::uint64_t id{};
    Side side{Side::Buy};
    Ticks price{};        // >= 1
    Shares size{};        // >= 1
    std::int64_t arrival_step{};
};

struct Trade {
    std::uint64_t maker_id{};
    std::uint64_t taker_id{};
    Ticks price{};        // always the resting (maker) order's price
    Shares size{};
    std::int64_t step{};
};

inline double ticks_to_price(Ticks t) { return static_cast<double>(t) * kTickSize; }

}  // namespace lobsim
