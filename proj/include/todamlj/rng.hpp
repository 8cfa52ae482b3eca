#pragma once

#include <cstdint>
#include <random>

namespace todamlj {

/// SplitMix64 mixing step; used to derive independent substream seeds from a
/// master seed so that ensemble members get decorrelated, reproducible streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for substream `stream` of a master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

/// Random stream backed by std::mt19937_64 (output sequence fixed by the
/// standard, hence portable).  The normal sampler is the Marsaglia polar
/// method coded here explicitly, so the draw sequence does not depend on the
/// standard library's unspecified std::normal_distribution algorithm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace todamlj
