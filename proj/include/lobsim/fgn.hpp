#pragma once

#include <cstdint>
#include <vector>

#include "lobsim/rng.hpp"

namespace lobsim {

/// Stationary Gaussian sequence with fractional-Gaussian-noise covariance
/// gamma(k) = 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}), unit variance.
struct FgnSeries {
    std::vector<double> values;
    double target_h{};
};

/// Exact fGn sample of length n via circulant embedding of the covariance
/// (FFT-based). Throws std::invalid_argument unless n >= 2 and 0 < h < 1.
FgnSeries generate_fgn(std::size_t n, double h, Rng& rng);
FgnSeries generate_fgn(std::size_t n, double h, std::uint64_t seed);

/// Elementwise sign of the series; exact zeros map to +1.
std::vector<int> signs_from_fgn(const FgnSeries& series);

/// Permutes `values` so that its rank sequence matches the rank sequence of
/// a fresh fGn draw with exponent h. The multiset of values is preserved
/// exactly; ties are broken by original index.
std::vector<double> impose_long_memory(std::vector<double> values, double h, Rng& rng);
std::vector<double> impose_long_memory(std::vector<double> values, double h, std::uint64_t seed);

/// Theoretical fGn autocovariance at lag k (unit variance).
double fgn_autocovariance(double h, std::int64_t k);

}  // namespace lobsim
