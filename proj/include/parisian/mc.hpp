#ifndef PARISIAN_MC_HPP
#define PARISIAN_MC_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "parisian/model.hpp"
#include "parisian/vanilla.hpp"

namespace parisian {

struct McConfig {
    long n_paths = 200000;         ///< total paths (antithetic pairs count as two)
    int n_steps_per_year = 20000;
    std::uint64_t seed = 1;
    bool antithetic = true;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;       ///< currency
    double std_error = 0.0;  ///< currency
    double knock_in_fraction = 0.0;
    long clamped_queries = 0;  ///< surface queries clamped to coverage on extreme paths
    McConfig config;
};

struct BiasRow {
    int n_steps_per_year = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double knock_in_fraction = 0.0;
};

struct BiasStudy {
    std::vector<BiasRow> rows;
    double extrapolated = 0.0;  ///< Richardson limit in sqrt(dt), from the two finest rungs
};

/// Simulates the exact-GBM log process on a fixed monitoring grid, tracks the consecutive
/// time below the barrier (strictly below; a monitored point at or above S_bar resets the
/// clock), and pays the discounted embedded-option value at the first monitoring time where
/// the clock reaches J_bar. `surface` provides the American embedded value; European mode
/// uses the closed form and may pass a surface or not.
McEstimate simulate_price(const MarketParams& mp, const ParisianContract& c,
                          const StatePoint& sp, const McConfig& cfg,
                          const VanillaSurface* surface);

/// Repeats the estimate over a ladder of monitoring frequencies with shared seeds.
BiasStudy bias_study(const MarketParams& mp, const ParisianContract& c, const StatePoint& sp,
                     const McConfig& base_cfg, const std::vector<int>& steps_ladder,
                     const VanillaSurface* surface);

namespace rng {

/// SplitMix64 (public-domain reference algorithm), used to seed per-path streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ (public-domain reference algorithm); one independent stream per path so the
/// estimate is identical however paths are partitioned across workers.
class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0, 1).
    double uniform() { return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
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
        have_spare_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rng

}  // namespace parisian

#endif
