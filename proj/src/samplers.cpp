#include "lobsim/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace lobsim {

namespace {
constexpr int kMaxRejectionIterations = 1 << 20;
}  // namespace

double sample_cancel_level(double mu, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("cancel level: sigma must be > 0");
    for (int i = 0; i < kMaxRejectionIterations; ++i) {
        const double x = std::exp(mu + sigma * rng.normal());
        if (x <= 1.0) return x;
    }
    throw std::runtime_error("cancel level: rejection sampling did not converge");
}

double cancel_position_norm(double gamma) {
    return (gamma + 1.0 - std::exp(gamma)) / gamma;
}

double sample_cancel_position(double gamma, Rng& rng) {
    if (!(gamma < 0.0)) throw std::invalid_argument("cancel position: gamma must be < 0");
    // Inverse transform on the analytic CDF
    // F(Y) = (Y - (e^{gamma Y} - 1)/gamma) / z, solved by bisection.
    const double z = cancel_position_norm(gamma);
    const double u = (1.0 - rng.uniform()) * z;  // target in (0, z]
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid - std::expm1(gamma * mid) / gamma;
        (f < u ? lo : hi) = mid;
    }
    return std::max(hi, 1e-300);  // (0, 1]
}

}  // namespace lobsim
