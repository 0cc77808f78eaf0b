#pragma once

#include <cstdint>
#include <random>

namespace fjet {

/// SplitMix64 mixing of (seed, stream) into a 64-bit seed. Used to derive
/// independent per-record and per-run substreams from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Reproducible random source: std::mt19937_64 (fully specified by the
/// standard) with explicit transforms, so streams agree across platforms.
/// uniform() takes the top 53 bits of one draw; normal() is the Marsaglia
/// polar method over uniform(-1, 1) pairs, caching the second variate.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix_seed(seed, index));
    }

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fjet
