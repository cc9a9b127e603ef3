#ifndef ZEROONE_RNG_HPP
#define ZEROONE_RNG_HPP

#include <cstdint>
#include <vector>

namespace zeroone {

// splitmix64: counter-based generator. All experiment randomness flows from
// a single 64-bit seed; substreams are derived by mixing (seed, stream id),
// so trials are reproducible independently and safe to run in parallel.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Substream for (seed, stream): double-mixed so adjacent ids decorrelate.
    static Rng substream(uint64_t seed, uint64_t stream) {
        return Rng(mix(mix(seed) ^ mix(stream + 0x632be59bd9b4e019ULL)));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform in [0, bound) by rejection; bound > 0.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // k distinct values from [0, n), ascending. Partial Fisher-Yates on an
    // index map kept sparse via swaps recorded in a small vector.
    std::vector<int> sample_without_replacement(int n, int k);

private:
    uint64_t state_;
};

} // namespace zeroone

#endif
