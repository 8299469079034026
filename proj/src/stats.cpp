#include "lobsim/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace lobsim {

namespace {

struct SlopeFit {
    double intercept{};
    double slope{};
    double slope_stderr{};
};

SlopeFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    const double mx = mean_of(xs), my = mean_of(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ys[i] - fit.intercept - fit.slope * xs[i];
            sse += e * e;
        }
        fit.slope_stderr = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

}  // namespace

double mean_of(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

DmaResult dma_hurst(std::span<const double> series, std::int64_t scale_min,
                    std::int64_t scale_max, int points_per_decade, double theta) {
    const std::int64_t n = static_cast<std::int64_t>(series.size());
    if (scale_min < 2) throw std::invalid_argument("dma: scale_min must be >= 2");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("dma: theta must be in [0, 1]");
    if (n < 100 * scale_min) throw std::runtime_error("dma: series too short");
    if (scale_max <= 0) scale_max = n / 10;
    scale_max = std::min(scale_max, n);

    // Profile of the mean-subtracted series and its prefix sums (moving
    // averages in O(1) per point).
    const double mean = mean_of(series);
    std::vector<double> profile(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        acc += series[static_cast<std::size_t>(i)] - mean;
        profile[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
        prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + profile[static_cast<std::size_t>(i)];

    std::set<std::int64_t> scale_set;
    const double lo = std::log10(static_cast<double>(scale_min));
    const double hi = std::log10(static_cast<double>(scale_max));
    for (double e = lo; e <= hi + 1e-12; e += 1.0 / points_per_decade) {
        const std::int64_t s = std::llround(std::pow(10.0, e));
        if (s >= scale_min && s <= scale_max) scale_set.insert(s);
    }
    if (scale_set.size() < 2) throw std::runtime_error("dma: not enough scales");

    DmaResult result;
    std::vector<double> log_scale, log_fluct;
    for (std::int64_t scale : scale_set) {
        // Window covering [t - (scale-1) + shift, t + shift]; theta = 0 is
        // the fully backward window.
        const std::int64_t shift = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(scale - 1)));
        double sum_sq = 0.0;
        std::int64_t count = 0;
        for (std::int64_t t = scale - 1 - shift; t + shift < n; ++t) {
            const std::int64_t w0 = t - (scale - 1) + shift;
            const double ma = (prefix[static_cast<std::size_t>(w0 + scale)] - prefix[static_cast<std::size_t>(w0)]) /
                              static_cast<double>(scale);
            const double resid = profile[static_cast<std::size_t>(t)] - ma;
            sum_sq += resid * resid;
            ++count;
        }
        const double fluct = std::sqrt(sum_sq / static_cast<double>(count));
        if (!(fluct > 0.0)) continue;  // constant profile at this scale
        result.scales.push_back(scale);
        result.fluctuations.push_back(fluct);
        log_scale.push_back(std::log10(static_cast<double>(scale)));
        log_fluct.push_back(std::log10(fluct));
    }
    if (log_scale.size() < 2) throw std::runtime_error("dma: degenerate fluctuation function");

    const SlopeFit fit = fit_line(log_scale, log_fluct);
    result.hurst = fit.slope;
    result.stderr_ = fit.slope_stderr;
    return result;
}

std::pair<std::vector<double>, std::vector<double>> returns_and_volatility(
    std::span<const double> mids) {
    if (mids.size() < 2) throw std::invalid_argument("returns: need at least two mid-prices");
    std::vector<double> returns(mids.size() - 1), volatility(mids.size() - 1);
    for (std::size_t i = 0; i + 1 < mids.size(); ++i) {
        if (!(mids[i] > 0.0) || !(mids[i + 1] > 0.0))
            throw std::invalid_argument("returns: mid-prices must be positive");
        returns[i] = std::log(mids[i + 1] / mids[i]);
        volatility[i] = std::abs(returns[i]);
    }
    return {std::move(returns), std::move(volatility)};
}

TailFit fit_power_law_tail(std::vector<double> samples) {
    if (samples.size() < 100) throw std::invalid_argument("tail fit: need >= 100 samples");
    for (double v : samples)
        if (!(v > 0.0)) throw std::invalid_argument("tail fit: samples must be positive");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();

    // Suffix sums of ln(x) for O(1) per-candidate likelihood.
    std::vector<double> suffix_log(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(samples[i]);

    std::vector<double> distinct;
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || samples[i] != samples[i - 1]) distinct.push_back(samples[i]);

    std::vector<double> candidates;
    constexpr std::size_t kMaxCandidates = 250;
    if (distinct.size() <= kMaxCandidates) {
        candidates = distinct;
    } else {
        for (std::size_t j = 0; j < kMaxCandidates; ++j) {
            const std::size_t idx = j * (distinct.size() - 1) / (kMaxCandidates - 1);
            if (candidates.empty() || distinct[idx] != candidates.back())
                candidates.push_back(distinct[idx]);
        }
    }

    TailFit best;
    bool found = false;
    for (double x_min : candidates) {
        const std::size_t first =
            static_cast<std::size_t>(std::lower_bound(samples.begin(), samples.end(), x_min) - samples.begin());
        const std::size_t n_tail = n - first;
        if (n_tail < 10) continue;
        const double log_sum = suffix_log[first] - static_cast<double>(n_tail) * std::log(x_min);
        if (!(log_sum > 0.0)) continue;
        const double alpha = 1.0 + static_cast<double>(n_tail) / log_sum;

        double ks = 0.0;
        for (std::size_t k = first; k < n; ++k) {
            const double fitted = 1.0 - std::pow(samples[k] / x_min, -(alpha - 1.0));
            const double emp_lo = static_cast<double>(k - first) / static_cast<double>(n_tail);
            const double emp_hi = static_cast<double>(k - first + 1) / static_cast<double>(n_tail);
            ks = std::max({ks, std::abs(fitted - emp_lo), std::abs(emp_hi - fitted)});
        }
        if (!found || ks < best.ks) {
            best = {alpha, x_min, ks};
            found = true;
        }
    }
    if (!found) throw std::runtime_error("tail fit: no candidate with >= 10 tail points");
    return best;
}

double divergence_rate(std::span<const double> prices, double fit_start_frac) {
    if (prices.size() < 2) throw std::invalid_argument("divergence: need at least two prices");
    if (!(fit_start_frac >= 0.0 && fit_start_frac < 1.0))
        throw std::invalid_argument("divergence: fit_start_frac must be in [0, 1)");
    const std::size_t start = static_cast<std::size_t>(std::floor(fit_start_frac * static_cast<double>(prices.size())));
    std::vector<double> ts, logs;
    ts.reserve(prices.size() - start);
    logs.reserve(prices.size() - start);
    for (std::size_t t = start; t < prices.size(); ++t) {
        if (!(prices[t] > 0.0)) throw std::invalid_argument("divergence: prices must be positive");
        ts.push_back(static_cast<double>(t));
        logs.push_back(std::log(prices[t]));
    }
    return fit_line(ts, logs).slope;
}

double half_life(std::span<const double> prices, double p_ref) {
    if (prices.size() < 2) throw std::invalid_argument("half life: need at least two prices");
    const double threshold = p_ref / 2.0;
    double sum = 0.0;
    std::int64_t count = 0;
    for (std::size_t t = 1; t < prices.size(); ++t) {
        const double prev = prices[t - 1] - threshold;
        const double curr = prices[t] - threshold;
        if (curr == 0.0 || (prev > 0.0 && curr < 0.0) || (prev < 0.0 && curr > 0.0)) {
            sum += static_cast<double>(t);
            ++count;
        }
    }
    if (count == 0) throw std::runtime_error("half life: price never crosses half the reference");
    return sum / static_cast<double>(count);
}

OlsFit ols2(std::span<const double> y, std::span<const double> phi_up,
            std::span<const double> abs_phi_down) {
    const std::size_t n = y.size();
    if (n < 4 || phi_up.size() != n || abs_phi_down.size() != n)
        throw std::invalid_argument("ols2: need >= 4 aligned observations");

    // Normal equations for X = [1, up, down].
    double s[3][3] = {};
    double b[3] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double row[3] = {1.0, phi_up[i], abs_phi_down[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) s[r][c] += row[r] * row[c];
            b[r] += row[r] * y[i];
        }
    }

    // Invert the 3x3 Gram matrix (needed for coefficient standard errors).
    double inv[3][3];
    const double det = s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) -
                       s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
                       s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
    double norm = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) norm = std::max(norm, std::abs(s[r][c]));
    if (std::abs(det) < 1e-12 * norm * norm * norm)
        throw std::invalid_argument("ols2: collinear design");
    inv[0][0] = (s[1][1] * s[2][2] - s[1][2] * s[2][1]) / det;
    inv[0][1] = (s[0][2] * s[2][1] - s[0][1] * s[2][2]) / det;
    inv[0][2] = (s[0][1] * s[1][2] - s[0][2] * s[1][1]) / det;
    inv[1][0] = (s[1][2] * s[2][0] - s[1][0] * s[2][2]) / det;
    inv[1][1] = (s[0][0] * s[2][2] - s[0][2] * s[2][0]) / det;
    inv[1][2] = (s[0][2] * s[1][0] - s[0][0] * s[1][2]) / det;
    inv[2][0] = (s[1][0] * s[2][1] - s[1][1] * s[2][0]) / det;
    inv[2][1] = (s[0][1] * s[2][0] - s[0][0] * s[2][1]) / det;
    inv[2][2] = (s[0][0] * s[1][1] - s[0][1] * s[1][0]) / det;

    double beta[3];
    for (int r = 0; r < 3; ++r)
        beta[r] = inv[r][0] * b[0] + inv[r][1] * b[1] + inv[r][2] * b[2];

    double sse = 0.0, sst = 0.0;
    const double my = mean_of(y);
    for (std::size_t i = 0; i < n; ++i) {
        const double fitted = beta[0] + beta[1] * phi_up[i] + beta[2] * abs_phi_down[i];
        sse += (y[i] - fitted) * (y[i] - fitted);
        sst += (y[i] - my) * (y[i] - my);
    }
    const double dof = static_cast<double>(n - 3);
    const double sigma2 = sse / dof;

    OlsFit fit;
    fit.intercept = beta[0];
    fit.coef_up = beta[1];
    fit.coef_down = beta[2];
    fit.mse = sigma2;
    const double r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    fit.adj_r2 = 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / dof;

    const boost::math::students_t dist(dof);
    for (int r = 0; r < 3; ++r) {
        const double se = std::sqrt(sigma2 * inv[r][r]);
        if (se == 0.0) {
            fit.p_values[r] = beta[r] == 0.0 ? 1.0 : 0.0;
        } else {
            const double t = beta[r] / se;
            fit.p_values[r] = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
        }
    }
    return fit;
}

}  // namespace lobsim
