#include <algorithm>
#include <cmath>
#include <limits>

#include "siirv/error.hpp"
#include "siirv/siiurv.hpp"

namespace siirv {

namespace {

constexpr double kWidthCap = 1125899906842624.0;  // 2^50

std::int64_t capped(double v) { return static_cast<std::int64_t>(std::min(std::ceil(v), kWidthCap)); }

// Enumerates vectors of `len` non-negative counts summing to at most `units`.
template <class F>
void for_each_composition(std::size_t len, std::int64_t units, F&& f) {
    std::vector<std::int64_t> c(len, 0);
    std::int64_t used = 0;
    while (true) {
        f(c);
        std::size_t d = 0;
        while (d < len) {
            if (used < units) {
                ++c[d];
                ++used;
                break;
            }
            used -= c[d];
            c[d] = 0;
            ++d;
        }
        if (d == len) return;
    }
}

}  // namespace

void SiiurvParams::validate() const {
    if (!(L >= 0.0) || !std::isfinite(L)) throw InvalidInput("siiurv: L must be finite and non-negative");
    if (!(B > 0.0) || !std::isfinite(B)) throw InvalidInput("siiurv: B must be positive");
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw InvalidInput("siiurv: gamma must lie in (0, 1)");
}

PMFTable SiiurvCover::locate(const PMFTable& x, std::int64_t S) const {
    const std::int64_t a = std::max(x.lo, S - half_width), b = std::min(x.hi(), S + half_width);
    const std::int64_t lo = std::min(a, S), hi = std::max(b, S);
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    double rest = 0.0;
    for (std::int64_t v = a; v <= b; ++v) {
        if (v == S) continue;
        const double q = std::floor(x.at(v) / pitch) * pitch;
        probs[static_cast<std::size_t>(v - lo)] = q;
        rest += q;
    }
    probs[static_cast<std::size_t>(S - lo)] = std::max(0.0, 1.0 - rest);
    PMFTable out{lo, std::move(probs), 0.0};
    trim(out, 0.0);
    return out;
}

double SiiurvCover::log_count() const {
    // per S: counts on the s - 1 non-centre points summing to at most U = floor(1 / pitch)
    const double units = std::floor(1.0 / pitch), s = interval_size;
    const double per = std::lgamma(units + s) - std::lgamma(units + 1.0) - std::lgamma(s);
    return std::log(static_cast<double>(s_hi - s_lo + 1)) + per;
}

std::vector<PMFTable> SiiurvCover::materialize(std::int64_t S, std::uint64_t cap) const {
    const double per = log_count() - std::log(static_cast<double>(s_hi - s_lo + 1));
    if (per > std::log(static_cast<double>(cap))) throw GridOverflow("siiurv cover: too many elements to materialize");
    const auto len = static_cast<std::size_t>(2 * half_width);
    const auto units = static_cast<std::int64_t>(std::floor(1.0 / pitch));
    std::vector<PMFTable> out;
    for_each_composition(len, units, [&](const std::vector<std::int64_t>& c) {
        std::vector<double> probs(len + 1);
        double rest = 0.0;
        for (std::size_t i = 0, j = 0; i <= len; ++i) {
            if (static_cast<std::int64_t>(i) == half_width) continue;
            probs[i] = static_cast<double>(c[j++]) * pitch;
            rest += probs[i];
        }
        probs[static_cast<std::size_t>(half_width)] = std::max(0.0, 1.0 - rest);
        out.push_back(PMFTable{S - half_width, std::move(probs), 0.0});
    });
    return out;
}

SiiurvCover::Nearest SiiurvCover::nearest(const PMFTable& x) const {
    Nearest best;
    best.tv.value = std::numeric_limits<double>::infinity();
    for (std::int64_t S = s_lo; S <= s_hi; ++S) {
        PMFTable e = locate(x, S);
        const TvResult tv = tv_distance(x, e);
        if (tv.value < best.tv.value) best = {std::move(e), S, tv};
    }
    return best;
}

SiiurvCover cover_siiurv(std::uint64_t terms, const SiiurvParams& p, double eps, const Constants& k) {
    p.validate();
    if (terms == 0) throw InvalidInput("siiurv cover: need at least one term");
    if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("siiurv cover: eps must lie in (0, 1)");
    SiiurvCover c;
    c.terms = terms;
    c.eps = eps;
    const double crit = k.c_siiurv * p.B * p.B / (std::pow(p.gamma, 3) * eps * eps);
    c.n_crit = static_cast<std::uint64_t>(std::min(std::ceil(crit), 4611686018427387904.0));
    c.sparse = terms < c.n_crit;
    // half the budget for the truncation of each term, half for quantization
    const double eps_t = eps / (2.0 * static_cast<double>(terms));
    c.w = std::max<std::int64_t>(1, capped(p.B * p.B / (eps_t * eps_t)));
    c.half_width = capped(static_cast<double>(terms) * static_cast<double>(c.w));
    c.interval_size = 2.0 * static_cast<double>(c.half_width) + 1.0;
    c.pitch = eps / (2.0 * c.interval_size);
    const auto t = static_cast<std::int64_t>(terms);
    c.s_lo = t * p.mode_lo;
    c.s_hi = t * (p.mode_lo + static_cast<std::int64_t>(std::floor(p.L)));
    return c;
}

SiiurvCover cover_siiurv(const std::vector<PMFTable>& terms, const SiiurvParams& p, double eps, const Constants& k) {
    p.validate();
    GaussParams g{0.0, 0.0};
    const double mode_hi = static_cast<double>(p.mode_lo) + p.L;
    for (const auto& t : terms) {
        const ModeInfo mi = modes_of(t);
        if (!mi.unimodal) throw AssumptionViolation("siiurv cover: term is not unimodal");
        for (auto m : mi.modes)
            if (m < p.mode_lo || static_cast<double>(m) > mode_hi)
                throw AssumptionViolation("siiurv cover: mode outside the declared range");
        if (t.at(mi.modes.front()) / t.mass() > 1.0 - p.gamma + 1e-12)
            throw AssumptionViolation("siiurv cover: mode mass exceeds 1 - gamma");
        const Moments m = moments(t);
        if (m.fourth > p.B * (1.0 + 1e-9) + moment_slack(t, 4))
            throw AssumptionViolation("siiurv cover: fourth central moment exceeds B");
        g.mu += m.mean;
        g.sigma2 += m.variance;
    }
    SiiurvCover c = cover_siiurv(terms.size(), p, eps, k);
    c.dense = g;
    return c;
}

}  // namespace siirv
