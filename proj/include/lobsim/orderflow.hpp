#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lobsim/empirical_cdf.hpp"
#include "lobsim/order_book.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/types.hpp"

namespace lobsim {

/// Mean order size and dispersion ratio beta = sd/mean as piecewise-linear
/// functions of the relative price.
struct SizeCurve {
    std::vector<double> x;          // ascending breakpoints in [-1, 1]
    std::vector<double> mean_size;  // > 0
    std::vector<double> beta;       // >= 0

    double mean_at(double xi) const;
    double beta_at(double xi) const;
    void validate() const;

    void write_csv(std::ostream& os) const;  // x,mean_size,beta
    static SizeCurve read_csv(std::istream& is);
};

struct CancelDistribution {
    double mu{};     // log-normal location of the relative level
    double sigma{};  // log-normal scale, > 0
    double gamma{};  // queue-position exponent, < 0
};

struct ModelParams {
    double h_s = 0.895;  // Hurst exponent of order directions
    double h_x = 0.847;  // Hurst exponent of relative prices
    EmpiricalCdf price_cdf;
    SizeCurve size_curve;
    double cancel_prob = 0.19;       // per-step cancellation probability
    double cancel_side_bias = 0.5;   // probability a cancellation targets the buy side
    CancelDistribution cancel_buy{-2.36, 1.13, -33.78};
    CancelDistribution cancel_sell{-2.49, 1.52, -36.57};
    // Order placements per day. The reference divergence/half-life scales
    // (in event steps) and the validation exponents pin this at roughly
    // 2e3 events per day; larger values over-weight the intraday
    // mean-reverting regime relative to the daily band re-anchoring.
    std::int64_t steps_per_day = 2000;
    std::uint64_t seed = 1;

    ModelParams();
    void validate() const;
};

/// Default relative-price distribution: sharply peaked at x = 0, asymmetric
/// (most mass on the limit-order side x < 0), with jumps at x = -1 and
/// x = +1. Matches the qualitative shape of observed order flow; intended
/// to be replaced by calibrated data where available.
EmpiricalCdf default_relative_price_cdf();
SizeCurve default_size_curve();

struct DayStreams {
    std::vector<int> signs;          // +1 buy, -1 sell
    std::vector<double> rel_prices;  // in [-1, 1]
};

/// Order directions and relative prices for one trading day, deterministic
/// per (params.seed, day_index). Signs come from an fGn draw with exponent
/// h_s; relative prices are inverse-CDF draws reordered to carry exponent h_x.
DayStreams generate_day_streams(const ModelParams& params, std::int64_t day_index);

/// Order size at relative price x: Normal(mean(x), beta(x) * mean(x)),
/// rounded to an integer share count and clamped to >= 1.
Shares generate_size(double x, const SizeCurve& curve, Rng& rng);

struct CancelTarget {
    Side side;
    std::size_t level_index;  // 1-based from best
    std::size_t queue_index;  // 1-based from earliest
};

struct CancelStats {
    std::int64_t emitted{};
    std::int64_t skipped_min2{};
};

/// With probability cancel_prob picks a cancellation target: a side, then a
/// price level via the log-normal relative-level draw, then a queue position
/// via the exponential-family draw. Returns nullopt when no cancellation is
/// scheduled or when the chosen side holds <= 2 orders (min-2 rule; counted
/// in stats if given).
std::optional<CancelTarget> maybe_cancel(const ModelParams& params, const OrderBook& book,
                                         Rng& rng, CancelStats* stats = nullptr);

}  // namespace lobsim
