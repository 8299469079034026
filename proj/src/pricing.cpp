#include "lobsim/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobsim {

Ticks scale_round_half_up(Ticks price, double factor) {
    if (price < 0 || !(factor >= 0.0)) throw std::invalid_argument("scale: bad inputs");
    const std::int64_t ppm = std::llround(factor * 1e6);
    return (price * ppm + 500000) / 1000000;
}

namespace {

Ticks round_clamp(double price_ticks, const PriceLimits& limits) {
    const Ticks rounded = static_cast<Ticks>(std::floor(price_ticks + 0.5));
    return std::clamp(rounded, limits.p_min, limits.p_max);
}

}  // namespace

Ticks price_from_relative(double x, Side side, Ticks best_bid, Ticks best_ask,
                          const PriceLimits& limits) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("relative price outside [-1, 1]");
    double p;
    if (side == Side::Buy) {
        const double a = static_cast<double>(best_ask);
        p = x >= 0.0 ? a + x * (static_cast<double>(limits.p_max) - a)
                     : a + x * (a - static_cast<double>(limits.p_min));
    } else {
        const double b = static_cast<double>(best_bid);
        p = x >= 0.0 ? b - x * (b - static_cast<double>(limits.p_min))
                     : b - x * (static_cast<double>(limits.p_max) - b);
    }
    return round_clamp(p, limits);
}

std::optional<double> relative_from_price(Ticks price, Side side, bool is_marketable,
                                          Ticks best_bid, Ticks best_ask,
                                          const PriceLimits& limits) {
    double numer, denom;
    if (side == Side::Buy) {
        numer = static_cast<double>(price - best_ask);
        denom = is_marketable ? static_cast<double>(limits.p_max - best_ask)
                              : static_cast<double>(best_ask - limits.p_min);
    } else {
        numer = static_cast<double>(best_bid - price);
        denom = is_marketable ? static_cast<double>(best_bid - limits.p_min)
                              : static_cast<double>(limits.p_max - best_bid);
    }
    if (denom == 0.0) return std::nullopt;
    return numer / denom;
}

PriceLimits roll_day(Ticks closing_price, double phi_up, double phi_down) {
    if (closing_price < 1) throw std::invalid_argument("closing price must be >= 1 tick");
    if (!(phi_up >= 0.0) || !(phi_down <= 0.0))
        throw std::invalid_argument("phi_up must be >= 0 and phi_down <= 0");
    PriceLimits limits;
    limits.phi_up = phi_up;
    limits.phi_down = phi_down;
    limits.p_max = scale_round_half_up(closing_price, 1.0 + phi_up);
    limits.p_min = std::max<Ticks>(1, scale_round_half_up(closing_price, 1.0 + phi_down));
    return limits;
}

Ticks closing_price_from_mids(const std::vector<double>& mid_log, int window) {
    if (mid_log.empty()) throw std::runtime_error("closing price: no mid-prices recorded");
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(window), mid_log.size());
    // Mids are exact halves of ticks; accumulate in half-ticks to round exactly.
    std::int64_t sum_half = 0;
    for (std::size_t i = mid_log.size() - n; i < mid_log.size(); ++i)
        sum_half += std::llround(2.0 * mid_log[i]);
    const std::int64_t c = static_cast<std::int64_t>(n);
    return (sum_half + c) / (2 * c);  // round-half-up of sum_half / (2 c)
}

double lower_bound_price(double phi_down) {
    if (!(phi_down < 0.0)) throw std::invalid_argument("lower bound: phi_down must be < 0");
    const std::int64_t k = std::llround(-phi_down * 1e6);  // |phi_down| in ppm
    const std::int64_t b_ticks = 1500000 / k;              // largest B with B k <= 1.5e6
    if (b_ticks * k <= 500000)
        throw std::runtime_error("lower bound: no tick multiple in the admissible interval");
    return static_cast<double>(b_ticks) * kTickSize;
}

}  // namespace lobsim
