#include "lobsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lobsim/pricing.hpp"
#include "lobsim/stats.hpp"

namespace lobsim {

namespace {

constexpr Shares kMinResting = 2;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Nelder-Mead on up to two parameters; deterministic, bounded iterations.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double step, int max_iter = 2000) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order[0], worst = order[dim];
        if (std::abs(values[worst] - values[best]) <=
            1e-12 * (std::abs(values[best]) + std::abs(values[worst]) + 1e-300))
            break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d] / static_cast<double>(dim);
        }
        const auto blend = [&](double c) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + c * (simplex[worst][d] - centroid[d]);
            return p;
        };
        std::vector<double> reflect = blend(-1.0);
        const double fr = f(reflect);
        if (fr < values[best]) {
            std::vector<double> expand = blend(-2.0);
            const double fe = f(expand);
            if (fe < fr) {
                simplex[worst] = std::move(expand);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflect);
                values[worst] = fr;
            }
        } else if (fr < values[order[dim - 1]]) {
            simplex[worst] = std::move(reflect);
            values[worst] = fr;
        } else {
            std::vector<double> contract = blend(0.5);
            const double fc = f(contract);
            if (fc < values[worst]) {
                simplex[worst] = std::move(contract);
                values[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d)
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (values[i] < values[best]) best = i;
    return simplex[best];
}

struct Histogram {
    std::vector<double> centers;
    std::vector<double> density;
};

Histogram log_spaced_histogram(const std::vector<double>& samples, int n_bins) {
    double lo = 1.0;
    for (double s : samples) lo = std::min(lo, s);
    lo = std::max(lo * 0.999, 1e-12);
    const double log_lo = std::log(lo), log_hi = 0.0;  // up to 1
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    for (int j = 0; j <= n_bins; ++j)
        edges[static_cast<std::size_t>(j)] = std::exp(log_lo + (log_hi - log_lo) * j / n_bins);
    std::vector<double> counts(static_cast<std::size_t>(n_bins), 0.0);
    for (double s : samples) {
        const double f = (std::log(s) - log_lo) / (log_hi - log_lo);
        const int j = std::clamp(static_cast<int>(f * n_bins), 0, n_bins - 1);
        counts[static_cast<std::size_t>(j)] += 1.0;
    }
    Histogram h;
    for (int j = 0; j < n_bins; ++j) {
        const double width = edges[static_cast<std::size_t>(j) + 1] - edges[static_cast<std::size_t>(j)];
        h.centers.push_back(std::sqrt(edges[static_cast<std::size_t>(j)] * edges[static_cast<std::size_t>(j) + 1]));
        h.density.push_back(counts[static_cast<std::size_t>(j)] / (width * static_cast<double>(samples.size())));
    }
    return h;
}

}  // namespace

std::pair<double, double> fit_lognormal_hist(const std::vector<double>& samples, int n_bins) {
    if (samples.size() < 1000) throw std::invalid_argument("lognormal fit: need >= 1000 samples");
    for (double s : samples)
        if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("lognormal fit: samples must be in (0, 1]");

    const Histogram hist = log_spaced_histogram(samples, n_bins);
    int occupied = 0;
    for (double d : hist.density)
        if (d > 0.0) ++occupied;
    if (occupied < 2) throw std::runtime_error("lognormal fit: degenerate histogram");

    // Moment-based start on ln X.
    double m = 0.0;
    for (double s : samples) m += std::log(s);
    m /= static_cast<double>(samples.size());
    double v = 0.0;
    for (double s : samples) v += (std::log(s) - m) * (std::log(s) - m);
    v /= static_cast<double>(samples.size());
    const double s0 = std::max(std::sqrt(v), 1e-3);

    const auto objective = [&](const std::vector<double>& p) {
        const double mu = p[0], sigma = std::exp(p[1]);
        const double z = normal_cdf(-mu / sigma);  // lognormal mass on (0, 1]
        if (!(z > 1e-12)) return 1e300;
        double err = 0.0;
        for (std::size_t j = 0; j < hist.centers.size(); ++j) {
            const double x = hist.centers[j];
            const double lg = std::log(x);
            const double model = std::exp(-(lg - mu) * (lg - mu) / (2.0 * sigma * sigma)) /
                                 (std::sqrt(2.0 * M_PI) * sigma * x * z);
            err += (model - hist.density[j]) * (model - hist.density[j]);
        }
        return err;
    };
    const std::vector<double> best = nelder_mead(objective, {m, std::log(s0)}, 0.25);
    return {best[0], std::exp(best[1])};
}

double fit_exp_position_hist(const std::vector<double>& samples, int n_bins) {
    if (samples.size() < 1000) throw std::invalid_argument("position fit: need >= 1000 samples");
    for (double s : samples)
        if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("position fit: samples must be in (0, 1]");

    // Uniform bins on (0, 1].
    std::vector<double> counts(static_cast<std::size_t>(n_bins), 0.0);
    for (double s : samples) {
        const int j = std::clamp(static_cast<int>(s * n_bins), 0, n_bins - 1);
        counts[static_cast<std::size_t>(j)] += 1.0;
    }
    std::vector<double> centers(static_cast<std::size_t>(n_bins)), density(static_cast<std::size_t>(n_bins));
    for (int j = 0; j < n_bins; ++j) {
        centers[static_cast<std::size_t>(j)] = (j + 0.5) / n_bins;
        density[static_cast<std::size_t>(j)] =
            counts[static_cast<std::size_t>(j)] * n_bins / static_cast<double>(samples.size());
    }

    const auto objective = [&](const std::vector<double>& p) {
        const double gamma = -std::exp(std::clamp(p[0], -12.0, 12.0));
        const double z = (gamma + 1.0 - std::exp(gamma)) / gamma;
        double err = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            const double model = (1.0 - std::exp(gamma * centers[j])) / z;
            err += (model - density[j]) * (model - density[j]);
        }
        return err;
    };
    const std::vector<double> best = nelder_mead(objective, {std::log(30.0)}, 0.5);
    return -std::exp(std::clamp(best[0], -12.0, 12.0));
}

namespace {

struct OpenOrder {
    Side side;
    Ticks price;
    Shares remaining;
};

struct ReplayStats {
    std::vector<double> signs;
    std::vector<double> rel_prices;
    std::vector<std::pair<double, double>> size_samples;  // (x, size)
    std::vector<double> level_frac_buy, level_frac_sell;
    std::vector<double> pos_frac_buy, pos_frac_sell;
    std::int64_t placements = 0;
    std::int64_t cancels = 0;
};

SizeCurve size_curve_from_samples(std::vector<std::pair<double, double>> samples) {
    constexpr std::size_t kBins = 50;
    if (samples.size() < kBins * 4) return default_size_curve();
    std::sort(samples.begin(), samples.end());
    SizeCurve curve;
    for (std::size_t b = 0; b < kBins; ++b) {
        const std::size_t lo = b * samples.size() / kBins;
        const std::size_t hi = (b + 1) * samples.size() / kBins;
        if (hi <= lo) continue;
        double mx = 0.0, mv = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            mx += samples[i].first;
            mv += samples[i].second;
        }
        const double count = static_cast<double>(hi - lo);
        mx /= count;
        mv /= count;
        double var = 0.0;
        for (std::size_t i = lo; i < hi; ++i) var += (samples[i].second - mv) * (samples[i].second - mv);
        var /= count;
        if (!curve.x.empty() && mx <= curve.x.back()) continue;  // duplicate bin centers
        curve.x.push_back(mx);
        curve.mean_size.push_back(std::max(mv, 1.0));
        curve.beta.push_back(mv > 0.0 ? std::sqrt(var) / mv : 0.0);
    }
    if (curve.x.size() < 2) return default_size_curve();
    return curve;
}

EmpiricalCdf cdf_from_samples(const std::vector<double>& xs) {
    EmpiricalCdf full = EmpiricalCdf::from_samples(xs);
    constexpr std::size_t kMaxSupport = 2001;
    const auto& sup = full.support();
    if (sup.size() <= kMaxSupport) return full;
    // Quantile-thin the support, preserving the endpoints.
    std::vector<double> txs, tps;
    for (std::size_t j = 0; j < kMaxSupport; ++j) {
        const std::size_t idx = j * (sup.size() - 1) / (kMaxSupport - 1);
        if (!txs.empty() && sup[idx] <= txs.back()) continue;
        txs.push_back(sup[idx]);
        tps.push_back(full.cumulative()[idx]);
    }
    return EmpiricalCdf(std::move(txs), std::move(tps));
}

}  // namespace

ModelParams estimate_params(const CalibrationInput& input) {
    if (input.events.empty()) throw std::invalid_argument("calibration: empty event stream");
    if (input.daily.empty()) throw std::invalid_argument("calibration: daily limits required");
    if (input.steps_per_day < 1) throw std::invalid_argument("calibration: steps_per_day must be >= 1");

    OrderBook book;
    std::unordered_map<std::uint64_t, OpenOrder> open;
    ReplayStats stats;
    std::int64_t current_day = -1;
    PriceLimits limits{};

    for (std::size_t idx = 0; idx < input.events.size(); ++idx) {
        const OrderEvent& ev = input.events[idx];
        const auto fail = [&](const std::string& what) {
            throw std::runtime_error("calibration: " + what + " at event " + std::to_string(idx));
        };
        if (ev.timestamp < current_day * input.steps_per_day) fail("timestamps must be non-decreasing");

        const std::int64_t day = ev.timestamp / input.steps_per_day;
        while (current_day < day) {
            ++current_day;
            if (current_day >= static_cast<std::int64_t>(input.daily.size()))
                fail("timestamp beyond the supplied daily limits");
            const DayRecord& rec = input.daily[static_cast<std::size_t>(current_day)];
            limits.p_min = rec.p_min;
            limits.p_max = rec.p_max;
            if (current_day > 0) {
                // Same rollover rule as the simulator; forget removed orders.
                rollover_remove_out_of_band(book, limits);
                for (auto it = open.begin(); it != open.end();) {
                    const bool out = it->second.price < limits.p_min || it->second.price > limits.p_max;
                    it = out ? open.erase(it) : std::next(it);
                }
            }
        }

        if (ev.kind == 'B' || ev.kind == 'S') {
            const Side side = ev.kind == 'B' ? Side::Buy : Side::Sell;
            ++stats.placements;
            stats.signs.push_back(side == Side::Buy ? 1.0 : -1.0);

            const auto bid = book.best_bid();
            const auto ask = book.best_ask();
            bool crosses = false;
            if (bid && ask) {
                crosses = side == Side::Buy ? ev.price >= *ask : ev.price <= *bid;
                const auto x = relative_from_price(ev.price, side, crosses, *bid, *ask, limits);
                if (x) {  // degenerate at-limit branches are skipped
                    stats.rel_prices.push_back(*x);
                    stats.size_samples.emplace_back(*x, static_cast<double>(ev.size));
                }
            } else {
                crosses = side == Side::Buy ? (ask && ev.price >= *ask) : (bid && ev.price <= *bid);
            }

            Order order{ev.order_ref, side, ev.price, ev.size, ev.timestamp};
            if (crosses) {
                const ExecutionResult exec = book.execute_marketable(order, kMinResting);
                for (const Trade& tr : exec.trades) {
                    auto it = open.find(tr.maker_id);
                    if (it == open.end()) fail("trade against unknown resting order");
                    it->second.remaining -= tr.size;
                    if (it->second.remaining <= 0) open.erase(it);
                }
            } else {
                try {
                    book.insert_limit(order);
                } catch (const std::exception& e) {
                    fail(e.what());
                }
                open.insert({ev.order_ref, OpenOrder{side, ev.price, ev.size}});
            }
        } else if (ev.kind == 'C') {
            const auto it = open.find(ev.order_ref);
            if (it == open.end()) fail("cancellation of unknown order");
            const Side side = it->second.side;
            const Ticks price = it->second.price;

            // Positional coordinates of the cancelled order at cancel time.
            std::size_t level_index = 0, found_level = 0, queue_index = 0;
            book.for_each_level(side, [&](Ticks level_price, const std::deque<Order>& queue) {
                ++level_index;
                if (level_price != price || found_level) return;
                found_level = level_index;
                for (std::size_t q = 0; q < queue.size(); ++q) {
                    if (queue[q].id == ev.order_ref) {
                        queue_index = q + 1;
                        break;
                    }
                }
            });
            if (!found_level || !queue_index) fail("cancelled order not resting in the book");

            const double level_frac = static_cast<double>(found_level) /
                                      static_cast<double>(book.level_count(side));
            const double pos_frac = static_cast<double>(queue_index) /
                                    static_cast<double>(book.queue_length(side, found_level));
            if (side == Side::Buy) {
                stats.level_frac_buy.push_back(level_frac);
                stats.pos_frac_buy.push_back(pos_frac);
            } else {
                stats.level_frac_sell.push_back(level_frac);
                stats.pos_frac_sell.push_back(pos_frac);
            }
            book.cancel_at(side, found_level, queue_index);
            open.erase(it);
            ++stats.cancels;
        } else {
            fail("unknown event kind");
        }
    }

    ModelParams params;
    params.steps_per_day = input.steps_per_day;
    // Memory cannot span day boundaries (flow regenerates daily), so the
    // DMA scale range is capped at one day.
    const auto capped_hurst = [&](const std::vector<double>& series) {
        const std::int64_t cap =
            std::min<std::int64_t>(static_cast<std::int64_t>(series.size()) / 10, input.steps_per_day);
        return dma_hurst(series, 10, std::max<std::int64_t>(cap, 100)).hurst;
    };
    params.h_s = capped_hurst(stats.signs);
    params.h_x = capped_hurst(stats.rel_prices);
    params.cancel_prob =
        stats.placements > 0 ? static_cast<double>(stats.cancels) / static_cast<double>(stats.placements) : 0.0;
    params.price_cdf = cdf_from_samples(stats.rel_prices);
    params.size_curve = size_curve_from_samples(std::move(stats.size_samples));
    if (stats.level_frac_buy.size() >= 1000) {
        const auto [mu, sigma] = fit_lognormal_hist(stats.level_frac_buy);
        params.cancel_buy.mu = mu;
        params.cancel_buy.sigma = sigma;
        params.cancel_buy.gamma = fit_exp_position_hist(stats.pos_frac_buy);
    }
    if (stats.level_frac_sell.size() >= 1000) {
        const auto [mu, sigma] = fit_lognormal_hist(stats.level_frac_sell);
        params.cancel_sell.mu = mu;
        params.cancel_sell.sigma = sigma;
        params.cancel_sell.gamma = fit_exp_position_hist(stats.pos_frac_sell);
    }
    return params;
}

}  // namespace lobsim
