#include <map>

#include "siirv/error.hpp"
#include "siirv/siirv.hpp"

namespace siirv {

void SIIRVSpec::validate() const {
    if (terms.empty()) throw InvalidInput("sum: needs at least one term");
    if (order_bound != 0 && terms.size() > order_bound) throw InvalidInput("sum: more terms than the order bound");
}

std::vector<PMFTable> term_tables(const SIIRVSpec& s, const ExpFamilySpec* family, double tail_target,
                                  const Constants& k) {
    std::vector<PMFTable> out;
    out.reserve(s.terms.size());
    std::map<ParamVector, PMFTable> cache;
    for (const auto& t : s.terms) {
        if (const auto* a = std::get_if<ParamVector>(&t)) {
            if (!family) throw InvalidInput("sum: parameter term without a family");
            auto it = cache.find(*a);
            if (it == cache.end()) it = cache.emplace(*a, pmf_member(*family, *a, tail_target, k)).first;
            out.push_back(it->second);
        } else {
            out.push_back(std::get<PMFTable>(t));
        }
    }
    return out;
}

PMFTable sum_pmf(const SIIRVSpec& s, const ExpFamilySpec* family, double tail_target, const Constants& k,
                 std::size_t cap) {
    s.validate();
    std::map<ParamVector, std::int64_t> counts;
    std::vector<PMFTable> explicit_terms;
    for (const auto& t : s.terms) {
        if (const auto* a = std::get_if<ParamVector>(&t))
            ++counts[*a];
        else
            explicit_terms.push_back(std::get<PMFTable>(t));
    }
    if (!counts.empty() && !family) throw InvalidInput("sum: parameter term without a family");
    PMFTable acc = PMFTable::point_mass(0);
    for (const auto& [a, m] : counts) acc = convolve(acc, convolve_power(pmf_member(*family, a, tail_target, k), m, cap), cap);
    for (const auto& t : explicit_terms) acc = convolve(acc, t, cap);
    return acc;
}

}  // namespace siirv
