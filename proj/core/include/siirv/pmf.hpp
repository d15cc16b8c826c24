#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "siirv/rng.hpp"

namespace siirv {

// Finite window [lo, lo + probs.size() - 1] of an integer distribution.
// tail_bound is a certified upper bound on the mass the window misses.
struct PMFTable {
    std::int64_t lo = 0;
    std::vector<double> probs;
    double tail_bound = 0.0;

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(probs.size()) - 1; }
    std::size_t size() const { return probs.size(); }
    bool contains(std::int64_t x) const { return x >= lo && x <= hi(); }
    double at(std::int64_t x) const { return contains(x) ? probs[static_cast<std::size_t>(x - lo)] : 0.0; }
    double mass() const;

    // Throws InvalidInput if any table invariant fails.
    void validate() const;

    static PMFTable make(std::int64_t lo, std::vector<double> probs, double tail_bound = 0.0);
    static PMFTable point_mass(std::int64_t x);
};

inline constexpr std::size_t kDefaultWindowCap = std::size_t{1} << 22;
inline constexpr double kTrimMass = 1e-15;
inline constexpr double kCompareTol = 1e-12;

struct TvResult {
    double value = 0.0;
    double slack = 0.0;  // true distance lies in [value - slack, value + slack]
};

TvResult tv_distance(const PMFTable& p, const PMFTable& q);

PMFTable convolve(const PMFTable& p, const PMFTable& q, std::size_t cap = kDefaultWindowCap);
// m-fold self convolution by repeated squaring; m >= 1.
PMFTable convolve_power(const PMFTable& p, std::int64_t m, std::size_t cap = kDefaultWindowCap);
PMFTable convolve_all(std::span<const PMFTable> tables, std::size_t cap = kDefaultWindowCap);
PMFTable shift(const PMFTable& p, std::int64_t c);

// Removes outer entries whose cumulative mass stays within `budget` and
// charges the removed mass to tail_bound.
void trim(PMFTable& p, double budget = kTrimMass);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double third_abs = 0.0;  // E|X - mean|^3
    double fourth = 0.0;     // E(X - mean)^4
};

// Moments of the table normalised to unit mass.
Moments moments(const PMFTable& p);
// Heuristic error scale for a moment of the given order: tail_bound * radius^order.
double moment_slack(const PMFTable& p, int order);

struct ModeInfo {
    std::vector<std::int64_t> modes;
    bool unimodal = false;
};

ModeInfo modes_of(const PMFTable& p);

// Inverse-CDF sampler over a table, renormalised to unit mass.
class TableSampler {
public:
    explicit TableSampler(const PMFTable& p);
    std::int64_t operator()(Rng& rng) const;

private:
    std::int64_t lo_;
    std::vector<double> cdf_;
};

std::vector<std::int64_t> sample(const PMFTable& p, Rng& rng, std::size_t count);

// Empirical distribution of integer samples.
PMFTable empirical(std::span<const std::int64_t> xs);

}  // namespace siirv
