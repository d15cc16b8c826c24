#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "siirv/expfam.hpp"
#include "siirv/pmf.hpp"

namespace siirv {

// A sum of independent integer terms, each a family member or an explicit table.
struct SIIRVSpec {
    using Term = std::variant<ParamVector, PMFTable>;
    std::vector<Term> terms;
    std::uint64_t order_bound = 0;  // 0: no bound beyond the term count

    void validate() const;
};

// Term tables; family is required when any term is a parameter vector.
std::vector<PMFTable> term_tables(const SIIRVSpec& s, const ExpFamilySpec* family, double tail_target = 1e-13,
                                  const Constants& k = {});

// pmf of the sum. Repeated parameter vectors are convolved by squaring.
PMFTable sum_pmf(const SIIRVSpec& s, const ExpFamilySpec* family, double tail_target = 1e-13,
                 const Constants& k = {}, std::size_t cap = kDefaultWindowCap);

}  // namespace siirv
