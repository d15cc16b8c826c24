#include "siirv/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "siirv/error.hpp"

namespace siirv {

double PMFTable::mass() const {
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

void PMFTable::validate() const {
    if (probs.empty()) throw InvalidInput("pmf table: empty window");
    if (!(tail_bound >= 0.0) || !(tail_bound < 0.5))
        throw InvalidInput("pmf table: tail_bound must lie in [0, 0.5)");
    for (double v : probs)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("pmf table: negative or non-finite entry");
    const double m = mass();
    if (m > 1.0 + 1e-12 || m < 1.0 - tail_bound - 1e-12)
        throw InvalidInput("pmf table: mass " + std::to_string(m) + " inconsistent with tail_bound");
}

PMFTable PMFTable::make(std::int64_t lo, std::vector<double> probs, double tail_bound) {
    PMFTable t{lo, std::move(probs), tail_bound};
    t.validate();
    return t;
}

PMFTable PMFTable::point_mass(std::int64_t x) {
    return PMFTable{x, {1.0}, 0.0};
}

TvResult tv_distance(const PMFTable& p, const PMFTable& q) {
    const std::int64_t lo = std::min(p.lo, q.lo);
    const std::int64_t hi = std::max(p.hi(), q.hi());
    double s = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) s += std::abs(p.at(x) - q.at(x));
    return {0.5 * s, p.tail_bound + q.tail_bound};
}

void trim(PMFTable& p, double budget) {
    if (p.probs.size() <= 1) return;
    const double side = 0.5 * budget;
    std::size_t left = 0;
    double cut_l = 0.0;
    while (left + 1 < p.probs.size() && cut_l + p.probs[left] <= side) cut_l += p.probs[left++];
    std::size_t right = p.probs.size();
    double cut_r = 0.0;
    while (right - 1 > left && cut_r + p.probs[right - 1] <= side) cut_r += p.probs[--right];
    if (left == 0 && right == p.probs.size()) return;
    p.probs = std::vector<double>(p.probs.begin() + static_cast<std::ptrdiff_t>(left),
                                  p.probs.begin() + static_cast<std::ptrdiff_t>(right));
    p.lo += static_cast<std::int64_t>(left);
    p.tail_bound += cut_l + cut_r;
}

PMFTable convolve(const PMFTable& p, const PMFTable& q, std::size_t cap) {
    const std::size_t n = p.size() + q.size() - 1;
    if (n > cap) throw WindowOverflow("convolution window of " + std::to_string(n) + " exceeds cap");
    PMFTable out;
    out.lo = p.lo + q.lo;
    out.probs.assign(n, 0.0);
    const auto& a = p.probs.size() >= q.probs.size() ? p.probs : q.probs;
    const auto& b = p.probs.size() >= q.probs.size() ? q.probs : p.probs;
    for (std::size_t j = 0; j < b.size(); ++j) {
        const double bj = b[j];
        if (bj == 0.0) continue;
        double* dst = out.probs.data() + j;
        for (std::size_t i = 0; i < a.size(); ++i) dst[i] += a[i] * bj;
    }
    out.tail_bound = p.tail_bound + q.tail_bound;
    trim(out);
    return out;
}

PMFTable convolve_power(const PMFTable& p, std::int64_t m, std::size_t cap) {
    if (m < 1) throw InvalidInput("convolve_power: m must be >= 1");
    PMFTable base = p;
    PMFTable acc;
    bool have = false;
    while (m > 0) {
        if (m & 1) {
            acc = have ? convolve(acc, base, cap) : base;
            have = true;
        }
        m >>= 1;
        if (m > 0) base = convolve(base, base, cap);
    }
    return acc;
}

PMFTable convolve_all(std::span<const PMFTable> tables, std::size_t cap) {
    if (tables.empty()) return PMFTable::point_mass(0);
    PMFTable acc = tables[0];
    for (std::size_t i = 1; i < tables.size(); ++i) acc = convolve(acc, tables[i], cap);
    return acc;
}

PMFTable shift(const PMFTable& p, std::int64_t c) {
    PMFTable out = p;
    out.lo += c;
    return out;
}

Moments moments(const PMFTable& p) {
    const double m = p.mass();
    Moments r;
    if (m <= 0.0) return r;
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) mean += static_cast<double>(p.lo + static_cast<std::int64_t>(i)) * p.probs[i];
    mean /= m;
    double v = 0.0, t = 0.0, f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = static_cast<double>(p.lo + static_cast<std::int64_t>(i)) - mean;
        const double d2 = d * d;
        v += d2 * p.probs[i];
        t += d2 * std::abs(d) * p.probs[i];
        f += d2 * d2 * p.probs[i];
    }
    r.mean = mean;
    r.variance = v / m;
    r.third_abs = t / m;
    r.fourth = f / m;
    return r;
}

double moment_slack(const PMFTable& p, int order) {
    const double radius = static_cast<double>(std::max(std::abs(p.lo), std::abs(p.hi())) + 1);
    return p.tail_bound * std::pow(radius, order);
}

ModeInfo modes_of(const PMFTable& p) {
    ModeInfo info;
    if (p.probs.empty()) return info;
    const double top = *std::max_element(p.probs.begin(), p.probs.end());
    std::size_t first = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.probs[i] >= top - kCompareTol) {
            info.modes.push_back(p.lo + static_cast<std::int64_t>(i));
            if (first == p.size()) first = i;
        }
    }
    bool ok = true;
    // non-decreasing up to the first mode, non-increasing after it
    for (std::size_t i = 0; i < first && ok; ++i)
        if (p.probs[i + 1] < p.probs[i] - kCompareTol) ok = false;
    for (std::size_t i = first; i + 1 < p.size() && ok; ++i)
        if (p.probs[i + 1] > p.probs[i] + kCompareTol) ok = false;
    info.unimodal = ok;
    return info;
}

TableSampler::TableSampler(const PMFTable& p) : lo_(p.lo), cdf_(p.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p.probs[i];
        cdf_[i] = s;
    }
    if (!(s > 0.0)) throw InvalidInput("sampler: table has no mass");
    for (double& c : cdf_) c /= s;
    cdf_.back() = 1.0;
}

std::int64_t TableSampler::operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                                        static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    return lo_ + idx;
}

std::vector<std::int64_t> sample(const PMFTable& p, Rng& rng, std::size_t count) {
    TableSampler s(p);
    std::vector<std::int64_t> out(count);
    for (auto& x : out) x = s(rng);
    return out;
}

PMFTable empirical(std::span<const std::int64_t> xs) {
    if (xs.empty()) throw InvalidInput("empirical: no samples");
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    PMFTable t;
    t.lo = *mn;
    t.probs.assign(static_cast<std::size_t>(*mx - *mn + 1), 0.0);
    const double w = 1.0 / static_cast<double>(xs.size());
    for (auto x : xs) t.probs[static_cast<std::size_t>(x - t.lo)] += w;
    return t;
}

}  // namespace siirv
