#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lobsim/orderflow.hpp"
#include "lobsim/stats.hpp"
#include "lobsim/types.hpp"

namespace lobsim {

/// Per-(phi_up, phi_down, seed) metrics. Fields left unset are situations
/// the metric does not apply to (or could not be computed for), serialized
/// as empty CSV cells.
struct SweepCell {
    double phi_up{};
    double phi_down{};
    int seed_index{};
    std::int64_t n_days{};
    std::optional<double> lambda;       // divergence rate, up-dominant cells
    std::optional<double> t_half;       // half-life, down-dominant cells
    std::optional<double> alpha;        // volatility tail exponent
    std::optional<double> x_min;
    std::optional<double> mean_return;
    std::optional<double> h_r, h_r_err;
    std::optional<double> h_v, h_v_err;
    std::optional<double> lower_bound;  // currency
};

struct SweepConfig {
    ModelParams params;
    std::vector<double> phi_ups;    // default 0.05..0.30 step 0.05
    std::vector<double> phi_downs;  // default -0.30..-0.05 step 0.05
    int seeds = 3;
    std::int64_t n_days = 250;
    Ticks initial_price = 1000;
    int workers = 0;  // 0 = hardware concurrency
    bool verbose = false;
};

std::vector<double> phi_range(double from, double to, double step);

/// Computes all SweepCell metrics from one mid-price trajectory in currency
/// units; initial_price (same units) anchors the half-life threshold.
SweepCell analyze_trajectory(const std::vector<double>& mids, double phi_up, double phi_down,
                             double initial_price);

/// Runs the full (phi_up, phi_down, seed) grid on a worker pool. Results are
/// ordered by (phi_up, phi_down, seed) regardless of completion order; cell
/// seeds depend only on (params.seed, phi indices, seed index).
std::vector<SweepCell> run_sweep(const SweepConfig& config);

struct RegressionRow {
    std::string metric;
    std::string regime;  // which cells entered the regression
    std::size_t n{};
    OlsFit fit;
};

/// The six regression families on sweep output: lambda (up-dominant cells),
/// t_half (down-dominant), alpha / h_r / h_v split into two regimes by the
/// sign of |phi_down| - phi_up, and mean_return over all cells.
std::vector<RegressionRow> sweep_regressions(const std::vector<SweepCell>& cells);

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);
void write_regressions_csv(std::ostream& os, const std::vector<RegressionRow>& rows);

}  // namespace lobsim
