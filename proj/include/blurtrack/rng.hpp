#pragma once

#include <cstdint>

// Deterministic pseudo-random generation. splitmix64 state transition
// (Steele et al.), with doubles drawn from the top 53 bits, so fixture
// seeds reproduce bit-identically on any platform and the sequence can be
// re-derived outside this codebase from the published constants.

namespace blurtrack {

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next_u64() % uint64_t(hi - lo + 1));
    }

    // Box-Muller; one value per draw to keep the stream position obvious.
    double gaussian(double mean = 0.0, double stddev = 1.0);

    // Independent stream for a substream id, e.g. one per frame, so work
    // can be parallelized without changing the output.
    Rng fork(uint64_t stream_id) const {
        Rng child(state_ ^ (0xA24BAED4963EE407ull * (stream_id + 1)));
        child.next_u64();
        return child;
    }

private:
    uint64_t state_;
};

}  // namespace blurtrack
