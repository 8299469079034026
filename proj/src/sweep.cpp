#include "lobsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lobsim/csv.hpp"
#include "lobsim/pricing.hpp"
#include "lobsim/simulator.hpp"

namespace lobsim {

namespace {

constexpr double kPhiEps = 1e-9;

// Regime of a cell by the sign of |phi_down| - phi_up.
int regime_of(double phi_up, double phi_down) {
    const double diff = std::abs(phi_down) - phi_up;
    if (diff > kPhiEps) return +1;   // down-dominant
    if (diff < -kPhiEps) return -1;  // up-dominant
    return 0;                        // symmetric
}

std::string opt_str(const std::optional<double>& v) { return v ? csv::fmt(*v) : std::string(); }

}  // namespace

std::vector<double> phi_range(double from, double to, double step) {
    std::vector<double> out;
    if (!(step > 0.0)) throw std::invalid_argument("phi range: step must be > 0");
    for (int k = 0;; ++k) {
        const double v = from + k * step;
        if (v > to + kPhiEps) break;
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("phi range: empty");
    return out;
}

SweepCell analyze_trajectory(const std::vector<double>& mids, double phi_up, double phi_down,
                             double initial_price) {
    SweepCell cell;
    cell.phi_up = phi_up;
    cell.phi_down = phi_down;
    const int regime = regime_of(phi_up, phi_down);

    if (phi_down < 0.0) cell.lower_bound = lower_bound_price(phi_down);
    if (mids.size() < 2) return cell;

    const auto [returns, volatility] = returns_and_volatility(mids);
    cell.mean_return = mean_of(returns);

    if (regime == -1) cell.lambda = divergence_rate(mids);
    if (regime == +1) {
        try {
            cell.t_half = half_life(mids, initial_price);
        } catch (const std::runtime_error&) {
            // price never halved; leave empty
        }
    }

    std::vector<double> positive;
    positive.reserve(volatility.size());
    for (double v : volatility)
        if (v > 0.0) positive.push_back(v);
    try {
        const TailFit tail = fit_power_law_tail(std::move(positive));
        cell.alpha = tail.alpha;
        cell.x_min = tail.x_min;
    } catch (const std::exception&) {
    }

    try {
        const DmaResult hr = dma_hurst(returns);
        cell.h_r = hr.hurst;
        cell.h_r_err = hr.stderr_;
        const DmaResult hv = dma_hurst(volatility);
        cell.h_v = hv.hurst;
        cell.h_v_err = hv.stderr_;
    } catch (const std::exception&) {
    }
    return cell;
}

std::vector<SweepCell> run_sweep(const SweepConfig& config) {
    struct Job {
        std::size_t slot;
        std::size_t i_up, i_down;
        int seed_index;
    };
    std::vector<Job> jobs;
    const std::size_t total =
        config.phi_ups.size() * config.phi_downs.size() * static_cast<std::size_t>(config.seeds);
    jobs.reserve(total);
    std::size_t slot = 0;
    for (std::size_t iu = 0; iu < config.phi_ups.size(); ++iu)
        for (std::size_t id = 0; id < config.phi_downs.size(); ++id)
            for (int s = 0; s < config.seeds; ++s) jobs.push_back({slot++, iu, id, s});

    std::vector<SweepCell> cells(total);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    std::atomic<bool> failed{false};
    std::string failure;

    const auto worker = [&]() {
        while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size() || failed.load()) return;
            const Job& job = jobs[j];
            try {
                ModelParams params = config.params;
                params.seed = Rng::derive(config.params.seed,
                                          job.i_up * 1000 + job.i_down,
                                          static_cast<std::uint64_t>(job.seed_index));
                SimulationConfig sim;
                sim.n_days = config.n_days;
                sim.phi_up = config.phi_ups[job.i_up];
                sim.phi_down = config.phi_downs[job.i_down];
                sim.initial_price = config.initial_price;
                SimulationResult result = run_simulation(params, sim);

                for (double& mid : result.mid_prices) mid *= kTickSize;
                SweepCell cell = analyze_trajectory(result.mid_prices, sim.phi_up, sim.phi_down,
                                                    ticks_to_price(sim.initial_price));
                cell.seed_index = job.seed_index;
                cell.n_days = config.n_days;
                cells[job.slot] = cell;
                if (config.verbose) {
                    std::lock_guard lock(log_mutex);
                    std::fprintf(stderr, "sweep cell phi_up=%.2f phi_down=%.2f seed=%d done\n",
                                 sim.phi_up, sim.phi_down, job.seed_index);
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(log_mutex);
                failure = e.what();
                failed.store(true);
                return;
            }
        }
    };

    unsigned n_workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("sweep failed: " + failure);
    return cells;
}

std::vector<RegressionRow> sweep_regressions(const std::vector<SweepCell>& cells) {
    struct Selector {
        const char* metric;
        const char* regime;
        std::optional<double> SweepCell::* field;
        int want_regime;  // +1 down-dominant, -1 up-dominant, 0 any; see include_equal
        bool include_equal;
    };
    // Regime splits follow the experiment write-up: alpha and h_v attach the
    // diagonal to the regime named by their label; h_r drops it.
    const Selector selectors[] = {
        {"lambda", "up_dominant", &SweepCell::lambda, -1, false},
        {"t_half", "down_dominant", &SweepCell::t_half, +1, false},
        {"alpha", "down_dominant", &SweepCell::alpha, +1, false},
        {"alpha", "up_or_equal", &SweepCell::alpha, -1, true},
        {"mean_return", "all", &SweepCell::mean_return, 0, true},
        {"h_r", "down_dominant", &SweepCell::h_r, +1, false},
        {"h_r", "up_dominant", &SweepCell::h_r, -1, false},
        {"h_v", "down_or_equal", &SweepCell::h_v, +1, true},
        {"h_v", "up_dominant", &SweepCell::h_v, -1, false},
    };

    std::vector<RegressionRow> rows;
    for (const Selector& sel : selectors) {
        std::vector<double> y, up, down;
        for (const SweepCell& cell : cells) {
            const auto& value = cell.*(sel.field);
            if (!value) continue;
            const int regime = regime_of(cell.phi_up, cell.phi_down);
            const bool match = sel.want_regime == 0 || regime == sel.want_regime ||
                               (sel.include_equal && regime == 0);
            if (!match) continue;
            y.push_back(*value);
            up.push_back(cell.phi_up);
            down.push_back(std::abs(cell.phi_down));
        }
        RegressionRow row;
        row.metric = sel.metric;
        row.regime = sel.regime;
        row.n = y.size();
        try {
            row.fit = ols2(y, up, down);
        } catch (const std::exception&) {
            continue;  // not enough populated cells for this family
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
    os << "phi_up,phi_down,seed,n_days,lambda,t_half,alpha,x_min,mean_return,"
          "h_r,h_r_err,h_v,h_v_err,lower_bound\n";
    for (const SweepCell& c : cells) {
        os << csv::fmt(c.phi_up) << ',' << csv::fmt(c.phi_down) << ',' << c.seed_index << ','
           << c.n_days << ',' << opt_str(c.lambda) << ',' << opt_str(c.t_half) << ','
           << opt_str(c.alpha) << ',' << opt_str(c.x_min) << ',' << opt_str(c.mean_return) << ','
           << opt_str(c.h_r) << ',' << opt_str(c.h_r_err) << ',' << opt_str(c.h_v) << ','
           << opt_str(c.h_v_err) << ',' << opt_str(c.lower_bound) << '\n';
    }
}

void write_regressions_csv(std::ostream& os, const std::vector<RegressionRow>& rows) {
    os << "metric,regime,n,intercept,coef_up,coef_down,p_intercept,p_up,p_down,adj_r2,mse\n";
    for (const RegressionRow& r : rows) {
        os << r.metric << ',' << r.regime << ',' << r.n << ',' << csv::fmt(r.fit.intercept) << ','
           << csv::fmt(r.fit.coef_up) << ',' << csv::fmt(r.fit.coef_down) << ','
           << csv::fmt(r.fit.p_values[0]) << ',' << csv::fmt(r.fit.p_values[1]) << ','
           << csv::fmt(r.fit.p_values[2]) << ',' << csv::fmt(r.fit.adj_r2) << ','
           << csv::fmt(r.fit.mse) << '\n';
    }
}

}  // namespace lobsim
