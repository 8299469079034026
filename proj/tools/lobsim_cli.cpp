// Command-line harness for the order-driven market simulator: single runs,
// (phi_up, phi_down) grid sweeps, trajectory analysis, calibration from
// order-event streams, and the price-floor table.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lobsim/calibration.hpp"
#include "lobsim/csv.hpp"
#include "lobsim/params_io.hpp"
#include "lobsim/simulator.hpp"
#include "lobsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace lobsim;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct PhiRange {
    double from{}, to{}, step{};
};

PhiRange parse_range(const std::string& text) {
    const auto fields = csv::split(text, ':');
    if (fields.size() != 3) throw CLI::ValidationError("range", "expected from:to:step");
    try {
        return {std::stod(fields[0]), std::stod(fields[1]), std::stod(fields[2])};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected numeric from:to:step");
    }
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

void write_mids_csv(std::ostream& os, const SimulationResult& result) {
    os << "step,mid\n";
    for (std::size_t i = 0; i < result.mid_prices.size(); ++i)
        os << result.mid_steps[i] << ',' << csv::fmt(result.mid_prices[i] * kTickSize) << '\n';
}

void write_trades_csv(std::ostream& os, const SimulationResult& result) {
    os << "step,price,size\n";
    for (const Trade& t : result.trades)
        os << t.step << ',' << csv::fmt(ticks_to_price(t.price)) << ',' << t.size << '\n';
}

void write_daily_csv(std::ostream& os, const SimulationResult& result) {
    os << "day,close,p_min,p_max\n";
    for (const DayRecord& d : result.days)
        os << d.day << ',' << csv::fmt(ticks_to_price(d.close)) << ','
           << csv::fmt(ticks_to_price(d.p_min)) << ',' << csv::fmt(ticks_to_price(d.p_max)) << '\n';
}

void write_events_csv(std::ostream& os, const std::vector<OrderEvent>& events) {
    os << "timestamp,kind,price,size,order_ref\n";
    for (const OrderEvent& ev : events)
        os << ev.timestamp << ',' << ev.kind << ',' << ev.price << ',' << ev.size << ','
           << ev.order_ref << '\n';
}

std::vector<OrderEvent> read_events_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open events file: " + path.string());
    std::vector<OrderEvent> events;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("timestamp", 0) == 0) continue;
        }
        const auto f = csv::split(line);
        if (f.size() != 5) throw std::runtime_error("events csv: expected five columns");
        OrderEvent ev;
        ev.timestamp = std::stoll(f[0]);
        if (f[1].size() != 1 || (f[1][0] != 'B' && f[1][0] != 'S' && f[1][0] != 'C'))
            throw std::runtime_error("events csv: kind must be B, S or C");
        ev.kind = f[1][0];
        ev.price = std::stoll(f[2]);
        ev.size = std::stoll(f[3]);
        ev.order_ref = std::stoull(f[4]);
        events.push_back(ev);
    }
    return events;
}

std::vector<DayRecord> read_daily_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open daily file: " + path.string());
    std::vector<DayRecord> days;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("day", 0) == 0) continue;
        }
        const auto f = csv::split(line);
        if (f.size() < 4) throw std::runtime_error("daily csv: expected day,close,p_min,p_max");
        DayRecord d;
        d.day = std::stoll(f[0]);
        d.close = std::llround(std::stod(f[1]) / kTickSize);
        d.p_min = std::llround(std::stod(f[2]) / kTickSize);
        d.p_max = std::llround(std::stod(f[3]) / kTickSize);
        days.push_back(d);
    }
    return days;
}

std::vector<double> read_mids_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mids file: " + path.string());
    std::vector<double> mids;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("step", 0) == 0) continue;
        }
        const auto f = csv::split(line);
        mids.push_back(std::stod(f.size() >= 2 ? f[1] : f[0]));
    }
    return mids;
}

void write_analyze_row(std::ostream& os, const SweepCell& cell) {
    const auto opt = [](const std::optional<double>& v) { return v ? csv::fmt(*v) : std::string(); };
    os << "phi_up,phi_down,lambda,t_half,alpha,x_min,mean_return,H_r,H_r_err,H_V,H_V_err\n";
    os << csv::fmt(cell.phi_up) << ',' << csv::fmt(cell.phi_down) << ',' << opt(cell.lambda) << ','
       << opt(cell.t_half) << ',' << opt(cell.alpha) << ',' << opt(cell.x_min) << ','
       << opt(cell.mean_return) << ',' << opt(cell.h_r) << ',' << opt(cell.h_r_err) << ','
       << opt(cell.h_v) << ',' << opt(cell.h_v_err) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-driven market simulator with daily price limits"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", events_out, book_out;
    std::string phi_up_range = "0.05:0.30:0.05", phi_down_range = "-0.30:-0.05:0.05";
    std::string events_path, daily_path, mids_path, out_file;
    double phi_up = 0.10, phi_down = -0.10, initial_price = 10.0;
    std::int64_t days = 250, steps_per_day = -1;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int seeds = 3, workers = 0;
    bool verbose = false;

    auto* simulate = app.add_subcommand("simulate", "run one simulation and write CSV outputs");
    simulate->add_option("--config", config_path, "model parameter JSON file");
    simulate->add_option("--out-dir", out_dir, "output directory");
    simulate->add_option("--days", days, "number of trading days");
    simulate->add_option("--steps-per-day", steps_per_day, "order placements per day");
    simulate->add_option("--seed", seed, "random seed")->each([&](const std::string&) { have_seed = true; });
    simulate->add_option("--phi-up", phi_up, "up price limit fraction");
    simulate->add_option("--phi-down", phi_down, "down price limit fraction (negative)");
    simulate->add_option("--initial-price", initial_price, "initial price in currency units");
    simulate->add_option("--events-out", events_out, "write the raw order-event stream to this file");
    simulate->add_option("--book-out", book_out, "write the final book snapshot to this file");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a (phi_up, phi_down) grid sweep");
    sweep_cmd->add_option("--config", config_path, "model parameter JSON file");
    sweep_cmd->add_option("--out-dir", out_dir, "output directory");
    sweep_cmd->add_option("--seeds", seeds, "seeds per grid cell");
    sweep_cmd->add_option("--phi-up", phi_up_range, "grid as from:to:step");
    sweep_cmd->add_option("--phi-down", phi_down_range, "grid as from:to:step");
    sweep_cmd->add_option("--days", days, "days per cell");
    sweep_cmd->add_option("--steps-per-day", steps_per_day, "order placements per day");
    sweep_cmd->add_option("--workers", workers, "worker threads (0 = all cores)");
    sweep_cmd->add_option("--initial-price", initial_price, "initial price in currency units");
    sweep_cmd->add_option("--seed", seed, "base random seed")->each([&](const std::string&) { have_seed = true; });
    sweep_cmd->add_flag("--verbose", verbose, "log per-cell progress");

    auto* analyze = app.add_subcommand("analyze", "compute metrics from an existing mids CSV");
    analyze->add_option("--mids", mids_path, "mids CSV (step,mid)")->required();
    analyze->add_option("--phi-up", phi_up, "up limit the series was generated with");
    analyze->add_option("--phi-down", phi_down, "down limit the series was generated with");
    analyze->add_option("--initial-price", initial_price, "initial price in currency units");
    analyze->add_option("--out", out_file, "output CSV (default stdout)");

    auto* calibrate = app.add_subcommand("calibrate", "estimate model parameters from an event stream");
    calibrate->add_option("--events", events_path, "order-event CSV (timestamp,kind,price,size,order_ref)")
        ->required();
    calibrate->add_option("--daily", daily_path, "daily bands CSV (day,close,p_min,p_max)")->required();
    calibrate->add_option("--steps-per-day", steps_per_day, "steps per day in the event timestamps");
    calibrate->add_option("--out-dir", out_dir, "directory for params.json and sidecar CSVs");

    auto* lower = app.add_subcommand("lower-bound", "print the price floor per down limit");
    lower->add_option("--phi-down", phi_down_range, "grid as from:to:step");
    lower->add_option("--out", out_file, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        ModelParams params;
        if (!config_path.empty()) params = load_params(config_path);
        if (steps_per_day > 0) params.steps_per_day = steps_per_day;
        if (have_seed) params.seed = seed;
        params.validate();

        if (simulate->parsed()) {
            SimulationConfig config;
            config.n_days = days;
            config.phi_up = phi_up;
            config.phi_down = phi_down;
            config.initial_price = std::llround(initial_price / kTickSize);
            config.record_trades = true;
            std::vector<OrderEvent> events;
            if (!events_out.empty())
                config.event_sink = [&](const OrderEvent& ev) { events.push_back(ev); };

            const SimulationResult result = run_simulation(params, config);

            fs::create_directories(out_dir);
            auto mids = open_out(fs::path(out_dir) / "mids.csv");
            write_mids_csv(mids, result);
            auto trades = open_out(fs::path(out_dir) / "trades.csv");
            write_trades_csv(trades, result);
            auto daily = open_out(fs::path(out_dir) / "daily.csv");
            write_daily_csv(daily, result);
            if (!events_out.empty()) {
                auto ev = open_out(events_out);
                write_events_csv(ev, events);
            }
            if (!book_out.empty()) {
                auto snapshot = open_out(book_out);
                result.final_book.write_snapshot_csv(snapshot);
            }
            std::cout << "simulated " << days << " days, " << result.mid_prices.size()
                      << " transactions, final close " << csv::fmt(ticks_to_price(result.days.back().close))
                      << "\n";
        } else if (sweep_cmd->parsed()) {
            SweepConfig config;
            config.params = params;
            const PhiRange up = parse_range(phi_up_range);
            const PhiRange down = parse_range(phi_down_range);
            config.phi_ups = phi_range(up.from, up.to, up.step);
            config.phi_downs = phi_range(down.from, down.to, down.step);
            config.seeds = seeds;
            config.n_days = days;
            config.initial_price = std::llround(initial_price / kTickSize);
            config.workers = workers;
            config.verbose = verbose;

            const std::vector<SweepCell> cells = run_sweep(config);
            fs::create_directories(out_dir);
            auto sweep_csv = open_out(fs::path(out_dir) / "sweep.csv");
            write_sweep_csv(sweep_csv, cells);
            auto reg_csv = open_out(fs::path(out_dir) / "regressions.csv");
            write_regressions_csv(reg_csv, sweep_regressions(cells));
            std::cout << "sweep complete: " << cells.size() << " cells\n";
        } else if (analyze->parsed()) {
            const std::vector<double> mids = read_mids_csv(mids_path);
            const SweepCell cell = analyze_trajectory(mids, phi_up, phi_down, initial_price);
            if (out_file.empty()) {
                write_analyze_row(std::cout, cell);
            } else {
                auto out = open_out(out_file);
                write_analyze_row(out, cell);
            }
        } else if (calibrate->parsed()) {
            CalibrationInput input;
            input.events = read_events_csv(events_path);
            input.daily = read_daily_csv(daily_path);
            input.steps_per_day = params.steps_per_day;
            const ModelParams estimated = estimate_params(input);
            save_params(estimated, out_dir);
            std::cout << "calibrated parameters written to " << out_dir << "/params.json\n";
        } else if (lower->parsed()) {
            const PhiRange range = parse_range(phi_down_range);
            const std::vector<double> grid = phi_range(range.from, range.to, range.step);
            std::ostringstream os;
            os << "phi_down,lower_bound\n";
            for (double phi : grid) os << csv::fmt(phi) << ',' << csv::fmt(lower_bound_price(phi)) << '\n';
            if (out_file.empty()) {
                std::cout << os.str();
            } else {
                auto out = open_out(out_file);
                out << os.str();
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return 0;
}
