#include "siirv/pnbd.hpp"

#include <algorithm>
#include <cmath>

#include "siirv/catalog.hpp"
#include "siirv/error.hpp"

namespace siirv {

void PNBDSpec::validate() const {
    if (!(kappa > 1.0)) throw InvalidInput("pnbd: kappa must exceed 1");
    if (!(p_low > 0.0) || p_low > 1.0) throw InvalidInput("pnbd: p_low must lie in (0, 1]");
    for (double p : probs) {
        if (!(p > 0.0) || p > 1.0) throw InvalidInput("pnbd: success probabilities must lie in (0, 1]");
        if (p < p_low) throw InvalidInput("pnbd: success probability below p_low");
    }
}

MassageResult pnbd_massage(const PNBDSpec& spec) {
    spec.validate();
    const double k = spec.kappa;
    const double p_rep = 1.0 - 1.0 / k;
    const double e_rep = 1.0 / (k - 1.0);

    MassageResult r;
    for (std::size_t i = 0; i < spec.probs.size(); ++i) {
        const double p = spec.probs[i];
        if (p > p_rep) {
            r.replaced.push_back(i);
            r.mean_replaced += (1.0 - p) / p;
        } else {
            r.probs.push_back(p);
        }
    }
    // all replacements share one mean, so the minimal prefix is a count
    auto kept = static_cast<std::size_t>(std::ceil(r.mean_replaced / e_rep - 1e-12));
    kept = std::min(kept, r.replaced.size());
    while (static_cast<double>(kept) * e_rep < r.mean_replaced && kept < r.replaced.size()) ++kept;
    r.kept = kept;
    r.dropped = r.replaced.size() - kept;
    r.probs.insert(r.probs.end(), kept, p_rep);
    r.mean_replacement = static_cast<double>(kept) * e_rep;
    r.expectation_gap = std::abs(r.mean_replacement - r.mean_replaced);
    r.tv_overhead = 3.0 / (k - 1.0);
    return r;
}

double pnbd_natural(double p) { return -std::log1p(-p); }
double pnbd_success(double a) { return -std::expm1(-a); }

PnbdCover pnbd_cover(double p_low, std::uint64_t n, double eps, const Constants& k) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("pnbd cover: eps must lie in (0, 1)");
    if (!(p_low > 0.0) || !(p_low < 1.0)) throw InvalidInput("pnbd cover: p_low must lie in (0, 1)");
    PnbdCover c;
    c.kappa = std::ceil(1.0 + k.c_massage / eps);
    c.tv_overhead = 3.0 / (c.kappa - 1.0);
    if (!(c.tv_overhead < eps)) throw ConfigError("pnbd cover: c_massage leaves no accuracy for the cover");
    const double a_lo = pnbd_natural(p_low), a_hi = std::log(c.kappa);
    if (!(a_lo < a_hi)) throw InvalidInput("pnbd cover: p_low must be below 1 - 1/kappa");
    c.family = catalog::geometric(a_lo, a_hi);
    c.cover = cover_siierv(c.family, n, eps - c.tv_overhead, k);
    return c;
}

NearestResult pnbd_nearest(const PnbdCover& c, const std::vector<double>& probs, const NearestOptions& opt,
                           const Constants& k) {
    PNBDSpec spec{probs, *std::min_element(probs.begin(), probs.end()), c.kappa};
    const MassageResult m = pnbd_massage(spec);
    std::vector<PMFTable> tables;
    std::vector<ParamVector> hint;
    for (double p : m.probs) {
        tables.push_back(geometric_pmf(p, 1e-14));
        hint.push_back({std::clamp(pnbd_natural(p), c.family.base_region.box_lo()[0], c.family.base_region.box_hi()[0])});
    }
    const PMFTable x = tables.empty() ? PMFTable::point_mass(0) : convolve_all(tables);
    NearestOptions o = opt;
    if (!o.terms_hint) o.terms_hint = hint;
    return nearest_in_cover(x, c.cover, c.family, o, k);
}

}  // namespace siirv
