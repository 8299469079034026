#include "lobsim/fgn.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace lobsim {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution on distinct
// buffers is.
std::mutex fftw_plan_mutex;

struct FftBuffers {
    std::size_t m;
    fftw_complex* in;
    fftw_complex* out;
    fftw_plan plan;

    explicit FftBuffers(std::size_t size) : m(size) {
        in = fftw_alloc_complex(m);
        out = fftw_alloc_complex(m);
        std::lock_guard lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~FftBuffers() {
        {
            std::lock_guard lock(fftw_plan_mutex);
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
    FftBuffers(const FftBuffers&) = delete;
    FftBuffers& operator=(const FftBuffers&) = delete;
};

}  // namespace

double fgn_autocovariance(double h, std::int64_t k) {
    const double a = static_cast<double>(std::abs(k));
    return 0.5 * (std::pow(a + 1.0, 2.0 * h) - 2.0 * std::pow(a, 2.0 * h) +
                  std::pow(std::abs(a - 1.0), 2.0 * h));
}

FgnSeries generate_fgn(std::size_t n, double h, Rng& rng) {
    if (n < 2) throw std::invalid_argument("fgn: n must be >= 2");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("fgn: h must be in (0, 1)");

    const std::size_t m = std::bit_ceil(std::max<std::size_t>(2 * n, 4));
    FftBuffers fft(m);

    // Circulant embedding of the covariance: first row
    // [g(0), g(1), ..., g(m/2), g(m/2-1), ..., g(1)].
    const std::size_t half = m / 2;
    std::vector<double> gamma(half + 1);
    for (std::size_t k = 0; k <= half; ++k)
        gamma[k] = fgn_autocovariance(h, static_cast<std::int64_t>(k));
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = j <= half ? j : m - j;
        fft.in[j][0] = gamma[k];
        fft.in[j][1] = 0.0;
    }
    fftw_execute(fft.plan);

    // Eigenvalues of the circulant are the FFT of its first row; for the fGn
    // covariance they are non-negative up to floating noise.
    std::vector<double> lambda(m);
    double max_ev = 0.0, min_ev = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        lambda[j] = fft.out[j][0];
        max_ev = std::max(max_ev, lambda[j]);
        min_ev = std::min(min_ev, lambda[j]);
    }
    if (min_ev < -1e-8 * max_ev)
        throw std::runtime_error("fgn: circulant embedding not non-negative definite");
    for (double& ev : lambda) ev = std::max(ev, 0.0);

    // Hermitian-symmetric Gaussian spectrum scaled by sqrt(lambda); its FFT
    // has the target covariance.
    fft.in[0][0] = std::sqrt(lambda[0] / m) * rng.normal();
    fft.in[0][1] = 0.0;
    fft.in[half][0] = std::sqrt(lambda[half] / m) * rng.normal();
    fft.in[half][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
        const double r = std::sqrt(lambda[k] / (2.0 * m));
        const double re = r * rng.normal();
        const double im = r * rng.normal();
        fft.in[k][0] = re;
        fft.in[k][1] = im;
        fft.in[m - k][0] = re;
        fft.in[m - k][1] = -im;
    }
    fftw_execute(fft.plan);

    FgnSeries series;
    series.target_h = h;
    series.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) series.values[i] = fft.out[i][0];
    return series;
}

FgnSeries generate_fgn(std::size_t n, double h, std::uint64_t seed) {
    Rng rng(seed);
    return generate_fgn(n, h, rng);
}

std::vector<int> signs_from_fgn(const FgnSeries& series) {
    std::vector<int> signs(series.values.size());
    for (std::size_t i = 0; i < signs.size(); ++i) signs[i] = series.values[i] < 0.0 ? -1 : +1;
    return signs;
}

std::vector<double> impose_long_memory(std::vector<double> values, double h, Rng& rng) {
    const std::size_t n = values.size();
    if (n < 2) return values;
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("impose_long_memory: values must be finite");

    const FgnSeries noise = generate_fgn(n, h, rng);

    // Rank positions of the noise (stable: ties by index).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return noise.values[a] < noise.values[b];
    });

    std::vector<double> sorted_values = values;
    std::stable_sort(sorted_values.begin(), sorted_values.end());

    std::vector<double> out(n);
    for (std::size_t rank = 0; rank < n; ++rank) out[order[rank]] = sorted_values[rank];
    return out;
}

std::vector<double> impose_long_memory(std::vector<double> values, double h, std::uint64_t seed) {
    Rng rng(seed);
    return impose_long_memory(std::move(values), h, rng);
}

}  // namespace lobsim
