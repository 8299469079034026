#pragma once

#include "lobsim/rng.hpp"

namespace lobsim {

/// Log-normal(mu, sigma) truncated to (0, 1] by rejection of draws above 1
/// (renormalized), the distribution of relative cancellation price levels.
/// Requires sigma > 0.
double sample_cancel_level(double mu, double sigma, Rng& rng);

/// Draw from density f(Y) = (1 - e^{gamma Y}) / z on (0, 1] with
/// z = (gamma + 1 - e^gamma) / gamma, the distribution of relative queue
/// positions of cancelled orders. Requires gamma < 0. Rejection sampling.
double sample_cancel_position(double gamma, Rng& rng);

/// Normalization constant z of the queue-position density.
double cancel_position_norm(double gamma);

}  // namespace lobsim
