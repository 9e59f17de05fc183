#ifndef OCCSTAB_RNG_HPP
#define OCCSTAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace occstab {

// splitmix64: used only to expand seeds into xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-derived random stream: stream k of a master seed is independent of
/// how work is scheduled across threads, so Monte Carlo aggregates are
/// reproducible for any worker count.
///
/// Core generator is xoshiro256++ (public domain, Blackman/Vigna); normal and
/// exponential variates are hand-rolled so that byte-identical reports do not
/// depend on a standard library's distribution implementation.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t sm = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t next_u64() {
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

    /// Uniform on the open interval (0,1): never 0, never 1, so logs and
    /// tangents below are always finite.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on [0,1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform angle on (-pi/2, pi/2).
    double uniform_angle() {
        return 3.14159265358979323846 * (uniform_open() - 0.5);
    }

    /// Exponential with mean 1.
    double exponential() { return -std::log(uniform_open()); }

    /// Standard normal (Box-Muller, cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double a = 2.0 * 3.14159265358979323846 * uniform_open();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool has_spare_;
    double spare_;
};

} // namespace occstab

#endif // OCCSTAB_RNG_HPP
