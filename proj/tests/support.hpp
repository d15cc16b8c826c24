#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "siirv/pmf.hpp"
#include "siirv/rng.hpp"

namespace siirv::test {

// Random table with exact tails: len entries at a random offset.
inline PMFTable random_table(Rng& rng, int max_len = 8, std::int64_t spread = 5) {
    const int len = static_cast<int>(rng.uniform_int(1, max_len));
    std::vector<double> w(static_cast<std::size_t>(len));
    double s = 0.0;
    for (auto& v : w) s += v = rng.uniform(0.01, 1.0);
    for (auto& v : w) v /= s;
    return PMFTable::make(rng.uniform_int(-spread, spread), w, 0.0);
}

// Closed-form geometric on {0, 1, ...} with ratio q = e^-a, truncated where
// the remaining mass drops below tail.
inline PMFTable closed_geometric(double a, double tail) {
    const double q = std::exp(-a);
    std::vector<double> p;
    double rest = 1.0;
    for (std::int64_t x = 0; rest > tail; ++x) {
        p.push_back((1.0 - q) * std::pow(q, static_cast<double>(x)));
        rest = std::pow(q, static_cast<double>(x + 1));
    }
    return PMFTable::make(0, p, rest);
}

inline double sq(double x) { return x * x; }

}  // namespace siirv::test
