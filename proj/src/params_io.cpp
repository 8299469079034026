#include "lobsim/params_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lobsim {

namespace {

using nlohmann::json;

void read_cancel(const json& j, const char* key, CancelDistribution& out) {
    if (!j.contains(key)) return;
    const json& c = j.at(key);
    if (c.contains("mu")) out.mu = c.at("mu").get<double>();
    if (c.contains("sigma")) out.sigma = c.at("sigma").get<double>();
    if (c.contains("gamma")) out.gamma = c.at("gamma").get<double>();
}

}  // namespace

ModelParams load_params(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config parse error in " + config_path.string() + ": " + e.what());
    }

    ModelParams params;
    if (j.contains("h_s")) params.h_s = j.at("h_s").get<double>();
    if (j.contains("h_x")) params.h_x = j.at("h_x").get<double>();
    if (j.contains("cancel_prob")) params.cancel_prob = j.at("cancel_prob").get<double>();
    if (j.contains("cancel_side_bias")) params.cancel_side_bias = j.at("cancel_side_bias").get<double>();
    read_cancel(j, "cancel_buy", params.cancel_buy);
    read_cancel(j, "cancel_sell", params.cancel_sell);
    if (j.contains("steps_per_day")) params.steps_per_day = j.at("steps_per_day").get<std::int64_t>();
    if (j.contains("seed")) params.seed = j.at("seed").get<std::uint64_t>();

    const auto base = config_path.parent_path();
    if (j.contains("price_cdf_csv")) {
        const auto path = base / j.at("price_cdf_csv").get<std::string>();
        std::ifstream csv_in(path);
        if (!csv_in) throw std::runtime_error("cannot open price cdf csv: " + path.string());
        params.price_cdf = EmpiricalCdf::read_csv(csv_in);
    }
    if (j.contains("size_curve_csv")) {
        const auto path = base / j.at("size_curve_csv").get<std::string>();
        std::ifstream csv_in(path);
        if (!csv_in) throw std::runtime_error("cannot open size curve csv: " + path.string());
        params.size_curve = SizeCurve::read_csv(csv_in);
    }
    params.validate();
    return params;
}

void save_params(const ModelParams& params, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "price_cdf.csv");
        params.price_cdf.write_csv(out);
    }
    {
        std::ofstream out(dir / "size_curve.csv");
        params.size_curve.write_csv(out);
    }
    json j;
    j["h_s"] = params.h_s;
    j["h_x"] = params.h_x;
    j["cancel_prob"] = params.cancel_prob;
    j["cancel_side_bias"] = params.cancel_side_bias;
    j["cancel_buy"] = {{"mu", params.cancel_buy.mu},
                       {"sigma", params.cancel_buy.sigma},
                       {"gamma", params.cancel_buy.gamma}};
    j["cancel_sell"] = {{"mu", params.cancel_sell.mu},
                        {"sigma", params.cancel_sell.sigma},
                        {"gamma", params.cancel_sell.gamma}};
    j["steps_per_day"] = params.steps_per_day;
    j["seed"] = params.seed;
    j["price_cdf_csv"] = "price_cdf.csv";
    j["size_curve_csv"] = "size_curve.csv";
    std::ofstream out(dir / "params.json");
    out << j.dump(2) << '\n';
}

}  // namespace lobsim
