#ifndef WEHSIM_RNG_HPP
#define WEHSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace wehsim {

// One splitmix64 step; the standard finalizer keeps derived seeds well mixed
// even for adjacent inputs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives a child seed from a base seed and a sequence of components (stream
// names, sweep coordinates, seed indices). Each component is folded through
// splitmix64, so any change to any component yields an unrelated stream and
// components not touched keep their streams intact.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> components) {
    std::uint64_t s = base;
    std::uint64_t acc = splitmix64(s);
    for (std::uint64_t c : components) {
        s ^= c;
        acc ^= splitmix64(s);
    }
    return acc;
}

inline std::uint64_t derive_stream_seed(std::uint64_t base, std::string_view stream) {
    return derive_seed(base, {fnv1a(stream)});
}

// Deterministic uniform stream. mt19937_64 output is specified by the
// standard, and the double mapping below avoids std::uniform_real_distribution
// whose sequence is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace wehsim

#endif
