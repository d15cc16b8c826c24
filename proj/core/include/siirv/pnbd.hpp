#pragma once

#include <cstddef>
#include <vector>

#include "siirv/covers.hpp"

namespace siirv {

// Sum of independent geometrics on {0, 1, ...} given by success probabilities.
struct PNBDSpec {
    std::vector<double> probs;
    double p_low = 0.0;
    double kappa = 2.0;

    void validate() const;
};

struct MassageResult {
    std::vector<double> probs;           // survivors, then the replacement terms
    std::vector<std::size_t> replaced;   // I: indices with p > 1 - 1/kappa
    std::size_t kept = 0;                // |I_star|
    std::size_t dropped = 0;             // |I_0|
    double mean_replaced = 0.0;          // sum over I of (1 - p) / p
    double mean_replacement = 0.0;       // |I_star| / (kappa - 1)
    double expectation_gap = 0.0;
    double tv_overhead = 0.0;            // 3 / (kappa - 1)
};

// Replaces near-degenerate terms by a few terms of success probability 1 - 1/kappa
// carrying at least the same mean.
MassageResult pnbd_massage(const PNBDSpec& spec);

// Natural parameter of a geometric with success probability p.
double pnbd_natural(double p);
double pnbd_success(double a);

struct PnbdCover {
    double kappa = 0.0;
    double tv_overhead = 0.0;
    ExpFamilySpec family;  // geometric on [-ln(1 - p_low), ln(kappa)]
    CoverSet cover;        // built at accuracy eps - tv_overhead
};

PnbdCover pnbd_cover(double p_low, std::uint64_t n, double eps, const Constants& k = {});

// Massages the target and searches the cover, using the surviving terms as hints.
NearestResult pnbd_nearest(const PnbdCover& c, const std::vector<double>& probs, const NearestOptions& opt = {},
                           const Constants& k = {});

}  // namespace siirv
