#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace pio {

namespace detail {

// SplitMix64 step (Steele, Lea, Flood 2014). Used only to spread seed bits.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Deterministic random stream. Every consumer derives its own stream from
// (master_seed, stream, substream); streams with distinct ids are
// statistically independent and never shared between tasks.
//
// The substream ids in use across the library:
//   0  direct / single-purpose draws
//   1  solver seed states (stream = seed index)
//   2  probe generator states (stream = generator index)
//   3  basis perturbations (stream = basis index)
//   4  sweep-internal draws
//
// Normal variates are produced by Box-Muller on top of the raw engine
// instead of std::normal_distribution, whose output sequence is
// implementation-defined; this keeps results byte-identical across
// standard libraries.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t master_seed, std::uint64_t stream = 0,
                          std::uint64_t substream = 0)
        : engine_(derive(master_seed, stream, substream)) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // One standard normal pair (Box-Muller, both branches of the transform).
    std::pair<double, double> normal_pair() {
        double u1 = 1.0 - uniform(); // (0, 1]: keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // One standard normal. Consumes a full pair so that the stream position
    // does not depend on the history of call types.
    double normal() { return normal_pair().first; }

    // Complex number with independent standard normal real/imaginary parts.
    std::complex<double> normal_complex() {
        auto [re, im] = normal_pair();
        return {re, im};
    }

    std::uint64_t raw() { return engine_(); }

  private:
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t substream) {
        std::uint64_t x = master;
        std::uint64_t s = detail::splitmix64(x);
        x ^= stream + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        s = detail::splitmix64(x);
        x ^= substream + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        return detail::splitmix64(x);
    }

    std::mt19937_64 engine_;
};

} // namespace pio
