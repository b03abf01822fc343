#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace svl {

/// splitmix64 mixing step; the key-derivation primitive for seeding streams.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic per-trajectory Gaussian stream. The draw sequence is a pure
/// function of (seed, trajectory_index); distinct trajectory indices give
/// statistically independent streams without any shared state.
///
/// Normals come from the Box-Muller transform over mt19937_64 uniforms, one
/// transform per pair, so the number of engine calls per draw is fixed and
/// array fills stay branch-free.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t trajectory_index)
        : seed_(seed), trajectory_index_(trajectory_index),
          engine_(derive_key(seed, trajectory_index))
    {
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t trajectory_index() const { return trajectory_index_; }

    /// One standard normal draw.
    double gaussian()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double z0;
        box_muller(z0, spare_);
        have_spare_ = true;
        return z0;
    }

    /// Fill a buffer with standard normals (pairwise transform; a cached
    /// spare from a previous odd-length request is consumed first).
    void fill_gaussian(std::span<double> out);

    /// Uniform draw on (0, 1].
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    }

    /// Stateless key derivation: chained splitmix64 over (base, salt).
    /// Adding unrelated (base, salt) pairs never perturbs existing keys.
    static std::uint64_t derive_key(std::uint64_t base, std::uint64_t salt)
    {
        std::uint64_t s = base;
        std::uint64_t k = splitmix64(s);
        s = k ^ salt;
        k = splitmix64(s);
        return splitmix64(s);
    }

private:
    void box_muller(double& z0, double& z1);

    std::uint64_t seed_;
    std::uint64_t trajectory_index_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace svl
