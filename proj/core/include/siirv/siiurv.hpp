#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "siirv/approx.hpp"
#include "siirv/constants.hpp"
#include "siirv/pmf.hpp"

namespace siirv {

// Class constants for sums of unimodal terms: modes in [mode_lo, mode_lo + L],
// fourth central moments at most B, mass off the mode at least gamma.
struct SiiurvParams {
    double L = 1.0;
    double B = 1.0;
    double gamma = 0.1;
    std::int64_t mode_lo = 0;

    void validate() const;
};

// Cover of order-n' sums. Sparse elements live on [S - h, S + h] for a mode sum S,
// with every point but S a multiple of `pitch`; S takes the remaining mass.
// Elements are indexed by S and a quantized vector and generated on demand.
struct SiiurvCover {
    std::uint64_t terms = 0;
    double eps = 0.0;
    std::uint64_t n_crit = 0;
    bool sparse = true;
    std::int64_t w = 0;            // per-term half-width
    std::int64_t half_width = 0;   // terms * w
    double interval_size = 0.0;    // 2 * half_width + 1
    double pitch = 0.0;
    std::int64_t s_lo = 0, s_hi = 0;
    std::optional<GaussParams> dense;  // set when built from explicit terms

    // The element for mode sum S obtained by quantizing x.
    PMFTable locate(const PMFTable& x, std::int64_t S) const;
    // Natural log of the number of sparse elements.
    double log_count() const;
    // All elements for mode sum S. GridOverflow above `cap`.
    std::vector<PMFTable> materialize(std::int64_t S, std::uint64_t cap) const;

    struct Nearest {
        PMFTable element;
        std::int64_t S = 0;
        TvResult tv;
    };
    Nearest nearest(const PMFTable& x) const;
};

SiiurvCover cover_siiurv(std::uint64_t terms, const SiiurvParams& p, double eps, const Constants& k = {});

// Checks the class conditions on each term (AssumptionViolation) and records
// the moment-matched rounded normal of the sum.
SiiurvCover cover_siiurv(const std::vector<PMFTable>& terms, const SiiurvParams& p, double eps,
                         const Constants& k = {});

}  // namespace siirv
