#ifndef CMC_RNG_HPP
#define CMC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace cmc {

/// splitmix64 step; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xoshiro256++ with samplers for the distributions the simulations need.
/// Self-contained so that identical seeds give identical streams on every
/// platform and toolchain.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    /// Stream for replication `index` of a run seeded with `seed`;
    /// independent of how replications are scheduled across workers.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Binomial(m, prob) as m Bernoulli draws (m is small in every scenario).
    int binomial(int m, double prob) {
        int count = 0;
        for (int t = 0; t < m; ++t) {
            if (uniform() < prob) ++count;
        }
        return count;
    }

    /// Poisson(mu) by Knuth's product method, split into chunks so the
    /// exp(-chunk) factor never underflows for large means.
    long poisson(double mu) {
        long total = 0;
        while (mu > 25.0) {
            total += poisson_knuth(25.0);
            mu -= 25.0;
        }
        return total + poisson_knuth(mu);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_knuth(double mu) {
        const double limit = std::exp(-mu);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace cmc

#endif // CMC_RNG_HPP
