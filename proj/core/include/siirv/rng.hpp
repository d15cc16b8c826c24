#pragma once

#include <cstdint>
#include <random>

namespace siirv {

// Seeded generator with deterministic child streams. All randomness in the
// library flows through an explicit Rng; nothing reads global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    std::uint64_t seed() const { return seed_; }

    // Child stream keyed by `stream`; independent of how many draws the
    // parent has already made.
    Rng split(std::uint64_t stream) const;

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace siirv
