#include "lobsim/orderflow.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lobsim/csv.hpp"
#include "lobsim/fgn.hpp"
#include "lobsim/samplers.hpp"

namespace lobsim {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

// Sub-stream ids for per-day seed derivation.
enum Stream : std::uint64_t { kSignStream = 0, kPriceDrawStream = 1, kReorderStream = 2, kFlowStream = 3 };

}  // namespace

double SizeCurve::mean_at(double xi) const { return interp(x, mean_size, xi); }
double SizeCurve::beta_at(double xi) const { return interp(x, beta, xi); }

void SizeCurve::validate() const {
    if (x.size() < 2 || x.size() != mean_size.size() || x.size() != beta.size())
        throw std::invalid_argument("size curve: need >= 2 aligned breakpoints");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && x[i] <= x[i - 1])
            throw std::invalid_argument("size curve: breakpoints must be ascending");
        if (!(mean_size[i] > 0.0)) throw std::invalid_argument("size curve: mean size must be > 0");
        if (!(beta[i] >= 0.0)) throw std::invalid_argument("size curve: beta must be >= 0");
    }
}

void SizeCurve::write_csv(std::ostream& os) const {
    os << "x,mean_size,beta\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << csv::fmt(x[i]) << ',' << csv::fmt(mean_size[i]) << ',' << csv::fmt(beta[i]) << '\n';
}

SizeCurve SizeCurve::read_csv(std::istream& is) {
    SizeCurve curve;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("x,", 0) == 0) continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 3) throw std::runtime_error("size curve csv: expected three columns");
        curve.x.push_back(std::stod(fields[0]));
        curve.mean_size.push_back(std::stod(fields[1]));
        curve.beta.push_back(std::stod(fields[2]));
    }
    curve.validate();
    return curve;
}

SizeCurve default_size_curve() {
    SizeCurve curve;
    curve.x = {-1.0, -0.05, 0.2, 1.0};
    curve.mean_size = {1500.0, 1500.0, 4000.0, 4000.0};
    curve.beta = {1.5, 1.5, 1.5, 1.5};
    return curve;
}

EmpiricalCdf default_relative_price_cdf() {
    // Two-sided exponential bulk around x = 0 plus endpoint spikes. Mass of
    // marketable orders (x >= 0) is 0.2828.
    const double mass_pos = 0.2828;
    const double atom_neg = 0.02, atom_pos = 0.005;
    const double w_neg = 0.10, w_pos = 0.045;
    const double cont_neg = 1.0 - mass_pos - atom_neg;
    const double cont_pos = mass_pos - atom_pos;
    // Normalizers of exp(-|x|/w) on (0, 1).
    const double z_pos = w_pos * (1.0 - std::exp(-1.0 / w_pos));

    std::vector<double> xs, ps;
    xs.push_back(-1.0);
    ps.push_back(atom_neg);  // atom at the down-limit endpoint
    const int kGrid = 800;
    for (int i = 0; i < kGrid; ++i) {
        // x from -1 to 0: cumulative of the negative-side density.
        const double x = -1.0 + (i + 1) / static_cast<double>(kGrid);
        const double mass = cont_neg * (std::exp(-1.0 / w_neg) - std::exp(x / w_neg)) /
                            (std::exp(-1.0 / w_neg) - 1.0);
        xs.push_back(x);
        ps.push_back(atom_neg + mass);
    }
    for (int i = 1; i <= kGrid; ++i) {
        const double x = i / static_cast<double>(kGrid);
        const double mass = cont_pos * w_pos * (1.0 - std::exp(-x / w_pos)) / z_pos;
        xs.push_back(x == 1.0 ? 1.0 - 1e-7 : x);
        ps.push_back(atom_neg + cont_neg + mass);
    }
    // Spike carrying the up-limit atom; after tick rounding it lands exactly
    // on p_max.
    xs.push_back(1.0);
    ps.push_back(1.0);
    return EmpiricalCdf(std::move(xs), std::move(ps));
}

ModelParams::ModelParams() : price_cdf(default_relative_price_cdf()), size_curve(default_size_curve()) {}

void ModelParams::validate() const {
    if (!(h_s > 0.0 && h_s < 1.0) || !(h_x > 0.0 && h_x < 1.0))
        throw std::invalid_argument("params: Hurst exponents must be in (0, 1)");
    if (!(cancel_prob >= 0.0 && cancel_prob < 1.0))
        throw std::invalid_argument("params: cancel_prob must be in [0, 1)");
    if (!(cancel_side_bias >= 0.0 && cancel_side_bias <= 1.0))
        throw std::invalid_argument("params: cancel_side_bias must be in [0, 1]");
    if (!(cancel_buy.sigma > 0.0) || !(cancel_sell.sigma > 0.0))
        throw std::invalid_argument("params: cancel sigma must be > 0");
    if (!(cancel_buy.gamma < 0.0) || !(cancel_sell.gamma < 0.0))
        throw std::invalid_argument("params: cancel gamma must be < 0");
    if (steps_per_day < 1) throw std::invalid_argument("params: steps_per_day must be >= 1");
    size_curve.validate();
}

DayStreams generate_day_streams(const ModelParams& params, std::int64_t day_index) {
    const std::size_t n = static_cast<std::size_t>(params.steps_per_day);
    DayStreams streams;

    Rng sign_rng(Rng::derive(params.seed, static_cast<std::uint64_t>(day_index), kSignStream));
    streams.signs = signs_from_fgn(generate_fgn(n, params.h_s, sign_rng));

    Rng draw_rng(Rng::derive(params.seed, static_cast<std::uint64_t>(day_index), kPriceDrawStream));
    std::vector<double> draws(n);
    for (double& d : draws) d = params.price_cdf.inverse(draw_rng.uniform());

    Rng reorder_rng(Rng::derive(params.seed, static_cast<std::uint64_t>(day_index), kReorderStream));
    streams.rel_prices = impose_long_memory(std::move(draws), params.h_x, reorder_rng);
    return streams;
}

Shares generate_size(double x, const SizeCurve& curve, Rng& rng) {
    const double mean = curve.mean_at(x);
    const double sd = curve.beta_at(x) * mean;
    const double draw = mean + sd * rng.normal();
    return std::max<Shares>(1, std::llround(draw));
}

std::optional<CancelTarget> maybe_cancel(const ModelParams& params, const OrderBook& book,
                                         Rng& rng, CancelStats* stats) {
    if (!rng.bernoulli(params.cancel_prob)) return std::nullopt;
    const Side side = rng.uniform() < params.cancel_side_bias ? Side::Buy : Side::Sell;
    if (book.order_count(side) <= 2) {
        if (stats) ++stats->skipped_min2;
        return std::nullopt;
    }
    const CancelDistribution& dist = side == Side::Buy ? params.cancel_buy : params.cancel_sell;

    const double level_frac = sample_cancel_level(dist.mu, dist.sigma, rng);
    const std::size_t levels = book.level_count(side);
    const std::size_t level_index = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(level_frac * static_cast<double>(levels))), 1, levels);

    const double pos_frac = sample_cancel_position(dist.gamma, rng);
    const std::size_t queue_len = book.queue_length(side, level_index);
    const std::size_t queue_index = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(pos_frac * static_cast<double>(queue_len))), 1, queue_len);

    if (stats) ++stats->emitted;
    return CancelTarget{side, level_index, queue_index};
}

}  // namespace lobsim
