#pragma once

#include <cstdint>
#include <random>

namespace gpplan {

/// splitmix64 step, used both as a mixer and for deriving sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministically derive an independent seed from a base seed and stream tags.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    z ^= splitmix64(s);
    s ^= b * 0xd1342543de82ef95ULL;
    z ^= splitmix64(s);
    s ^= c * 0xaf251af3b0f025b5ULL;
    z ^= splitmix64(s);
    return z;
}

/// Deterministic uniform generator. All draws go through explicit integer
/// arithmetic so that streams are reproducible independent of the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform double in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    /// Uniform integer in [0, n), n > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace gpplan
