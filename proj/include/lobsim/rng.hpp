#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lobsim {

/// Mixes a 64-bit state and advances it (splitmix64). Used for seeding and
/// for deriving independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. All distributions are generated explicitly
/// (no std:: distribution objects) so that streams are bit-identical across
/// standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // mt19937_64 seeded from a splitmix64 expansion of the user seed.
        std::uint64_t s = seed;
        std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
        gen_.seed(seq);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via the Marsaglia polar method (cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Derives an independent sub-stream seed from (base, stream, index).
    /// Same inputs always give the same seed.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
        std::uint64_t s = base;
        (void)splitmix64(s);
        s ^= 0xbf58476d1ce4e5b9ULL * (stream + 0x9e3779b97f4a7c15ULL);
        (void)splitmix64(s);
        s ^= 0x94d049bb133111ebULL * (index + 0x9e3779b97f4a7c15ULL);
        return splitmix64(s);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lobsim
