#include "siirv/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "siirv/error.hpp"

namespace siirv {

namespace {

// P(a < Z <= b) for a standard normal, accurate in both tails.
double normal_interval(double a, double b) {
    const double r = 1.0 / std::numbers::sqrt2;
    if (a >= 0.0) return 0.5 * (std::erfc(a * r) - std::erfc(b * r));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * r) - std::erfc(-a * r));
    return 1.0 - 0.5 * std::erfc(b * r) - 0.5 * std::erfc(-a * r);
}

double normal_lower(double a) { return 0.5 * std::erfc(-a / std::numbers::sqrt2); }
double normal_upper(double b) { return 0.5 * std::erfc(b / std::numbers::sqrt2); }

}  // namespace

PMFTable disc_gauss_pmf(const GaussParams& g, double tail_target) {
    if (!(g.sigma2 > 0.0)) throw InvalidInput("rounded normal: variance must be positive");
    if (!(tail_target > 0.0) || !(tail_target < 0.5)) throw InvalidInput("rounded normal: bad tail target");
    const double sigma = std::sqrt(g.sigma2);
    const double half = sigma * std::sqrt(2.0 * std::log(2.0 / tail_target)) + 2.0;
    const auto lo = static_cast<std::int64_t>(std::floor(g.mu - half));
    const auto hi = static_cast<std::int64_t>(std::ceil(g.mu + half));
    PMFTable t;
    t.lo = lo;
    t.probs.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t x = lo; x <= hi; ++x) {
        const double a = (static_cast<double>(x) - 0.5 - g.mu) / sigma;
        const double b = (static_cast<double>(x) + 0.5 - g.mu) / sigma;
        t.probs[static_cast<std::size_t>(x - lo)] = std::max(0.0, normal_interval(a, b));
    }
    t.tail_bound = normal_lower((static_cast<double>(lo) - 0.5 - g.mu) / sigma) +
                   normal_upper((static_cast<double>(hi) + 0.5 - g.mu) / sigma);
    return t;
}

double tv_gauss_bound(const GaussParams& g1, const GaussParams& g2) {
    const GaussParams& a = g1.sigma2 <= g2.sigma2 ? g1 : g2;
    const GaussParams& b = g1.sigma2 <= g2.sigma2 ? g2 : g1;
    if (!(a.sigma2 > 0.0)) throw InvalidInput("tv_gauss_bound: variances must be positive");
    return 0.5 * (std::abs(a.mu - b.mu) / std::sqrt(a.sigma2) + (b.sigma2 - a.sigma2) / a.sigma2);
}

double tv_poisson_bound(double l1, double l2) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) throw InvalidInput("tv_poisson_bound: rates must be positive");
    return std::sinh(std::abs(l1 - l2));
}

double shift_distance_bound(std::span<const double> mode_masses) {
    double s = 0.25;
    for (double d : mode_masses) s += 1.0 - d;
    return std::clamp(std::sqrt(2.0 / std::numbers::pi) / std::sqrt(s), 0.0, 1.0);
}

double berry_esseen_bound(const MomentSummary& s) {
    if (!(s.sigma2 > 0.0)) throw InvalidInput("berry_esseen_bound: variance must be positive");
    const double sigma = std::sqrt(s.sigma2);
    const double r = s.beta / s.sigma2;
    const double c = 5.0 + 3.0 * std::sqrt(std::numbers::pi / 8.0);
    return s.shift_delta * (1.0 + 1.5 * r) + (1.0 / sigma) * (1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)) + c * r);
}

MomentSummary summarize_sum(std::span<const PMFTable> terms) {
    if (terms.empty()) throw InvalidInput("summarize_sum: no terms");
    MomentSummary s;
    for (const auto& t : terms) {
        const auto m = moments(t);
        s.mu += m.mean;
        s.sigma2 += m.variance;
        s.beta += m.third_abs;
    }
    const std::size_t n = terms.size();
    std::vector<PMFTable> prefix(n + 1), suffix(n + 1);
    prefix[0] = PMFTable::point_mass(0);
    suffix[n] = PMFTable::point_mass(0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = convolve(prefix[i], terms[i]);
    for (std::size_t i = n; i-- > 0;) suffix[i] = convolve(suffix[i + 1], terms[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const PMFTable rest = convolve(prefix[i], suffix[i + 1]);
        s.shift_delta = std::max(s.shift_delta, tv_distance(rest, shift(rest, 1)).value);
    }
    return s;
}

PMFTable poisson_pmf(double lambda, double tail_target) {
    if (!(lambda > 0.0)) throw InvalidInput("poisson: rate must be positive");
    // log pmf accumulated term by term; stop once the geometric tail bound is small
    std::vector<double> probs;
    double logp = -lambda;
    std::int64_t x = 0;
    double tail = 1.0;
    while (true) {
        probs.push_back(std::exp(logp));
        const double next = logp + std::log(lambda) - std::log(static_cast<double>(x + 1));
        if (static_cast<double>(x + 2) > lambda) {
            const double ratio = lambda / static_cast<double>(x + 2);
            tail = std::exp(next) / (1.0 - ratio);
            if (tail <= tail_target) break;
        }
        logp = next;
        ++x;
        if (x > (std::int64_t{1} << 24)) throw WindowOverflow("poisson: window too large");
    }
    return PMFTable{0, std::move(probs), tail};
}

PMFTable geometric_pmf(double p, double tail_target) {
    if (!(p > 0.0) || !(p <= 1.0)) throw InvalidInput("geometric: success probability must lie in (0, 1]");
    if (p == 1.0) return PMFTable::point_mass(0);
    const double q = 1.0 - p;
    // P(X > n) = q^(n+1)
    const auto n = static_cast<std::int64_t>(std::ceil(std::log(tail_target) / std::log(q)));
    PMFTable t;
    t.lo = 0;
    t.probs.resize(static_cast<std::size_t>(std::max<std::int64_t>(n, 0) + 1));
    double v = p;
    for (auto& e : t.probs) {
        e = v;
        v *= q;
    }
    t.tail_bound = std::pow(q, static_cast<double>(t.probs.size()));
    return t;
}

PoissonApprox poisson_approx_bound(std::span<const double> success_probs) {
    PoissonApprox r;
    double sq = 0.0;
    for (double p : success_probs) {
        if (!(p > 0.0) || !(p <= 1.0)) throw InvalidInput("poisson_approx_bound: probabilities must lie in (0, 1]");
        const double m = (1.0 - p) / p;
        r.lambda += m;
        sq += m * m;
    }
    r.bound = r.lambda > 0.0 ? std::min(1.0, 1.0 / r.lambda) * sq : 0.0;
    return r;
}

BoundCheck check_tv_gauss(const GaussParams& g1, const GaussParams& g2) {
    BoundCheck c;
    c.bound = tv_gauss_bound(g1, g2);
    const auto t = tv_distance(disc_gauss_pmf(g1, 1e-14), disc_gauss_pmf(g2, 1e-14));
    c.oracle = t.value;
    c.slack = t.slack;
    c.holds = c.oracle <= c.bound + c.slack;
    return c;
}

BoundCheck check_tv_poisson(double l1, double l2) {
    BoundCheck c;
    c.bound = tv_poisson_bound(l1, l2);
    const auto t = tv_distance(poisson_pmf(l1, 1e-14), poisson_pmf(l2, 1e-14));
    c.oracle = t.value;
    c.slack = t.slack;
    c.holds = c.oracle <= c.bound + c.slack;
    return c;
}

BoundCheck check_shift_distance(std::span<const PMFTable> terms) {
    std::vector<double> d;
    for (const auto& t : terms) d.push_back(*std::max_element(t.probs.begin(), t.probs.end()));
    BoundCheck c;
    c.bound = shift_distance_bound(d);
    const PMFTable x = convolve_all(terms);
    const auto t = tv_distance(x, shift(x, 1));
    c.oracle = t.value;
    c.slack = t.slack;
    c.holds = c.oracle <= c.bound + c.slack;
    return c;
}

BoundCheck check_berry_esseen(std::span<const PMFTable> terms) {
    const MomentSummary s = summarize_sum(terms);
    BoundCheck c;
    c.bound = berry_esseen_bound(s);
    const PMFTable x = convolve_all(terms);
    const auto t = tv_distance(x, disc_gauss_pmf({s.mu, s.sigma2}, 1e-14));
    c.oracle = t.value;
    c.slack = t.slack;
    c.holds = c.oracle <= c.bound + c.slack;
    return c;
}

BoundCheck check_poisson_approx(std::span<const double> success_probs) {
    const PoissonApprox pa = poisson_approx_bound(success_probs);
    std::vector<PMFTable> terms;
    for (double p : success_probs) terms.push_back(geometric_pmf(p, 1e-15));
    const PMFTable x = convolve_all(terms);
    BoundCheck c;
    c.bound = pa.bound;
    const auto t = tv_distance(x, poisson_pmf(pa.lambda, 1e-14));
    c.oracle = t.value;
    c.slack = t.slack;
    c.holds = c.oracle <= c.bound + c.slack;
    return c;
}

}  // namespace siirv
