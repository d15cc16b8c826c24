#include "siirv/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "siirv/error.hpp"

namespace siirv {

namespace {

constexpr std::int64_t kNoLowerBound = std::numeric_limits<std::int64_t>::min() / 4;

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os.precision(10);
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

}  // namespace

StatCoord StatCoord::catalog(const std::string& name) {
    StatCoord c;
    if (name == "x")
        c.kind = Kind::Identity;
    else if (name == "x2")
        c.kind = Kind::Square;
    else if (name == "abs")
        c.kind = Kind::Abs;
    else if (name == "log")
        c.kind = Kind::Log;
    else
        throw InvalidInput("unknown sufficient statistic '" + name + "'");
    return c;
}

StatCoord StatCoord::table(std::int64_t lo, std::vector<double> values) {
    if (values.empty()) throw InvalidInput("explicit statistic table is empty");
    StatCoord c;
    c.kind = Kind::Table;
    c.lo = lo;
    c.values = std::move(values);
    return c;
}

std::string StatCoord::name() const {
    switch (kind) {
        case Kind::Identity: return "x";
        case Kind::Square: return "x2";
        case Kind::Abs: return "abs";
        case Kind::Log: return "log";
        case Kind::Table: return "table";
    }
    return "?";
}

double StatCoord::eval(std::int64_t x) const {
    const auto xd = static_cast<double>(x);
    switch (kind) {
        case Kind::Identity: return xd;
        case Kind::Square: return xd * xd;
        case Kind::Abs: return std::abs(xd);
        case Kind::Log:
            if (x <= 0) throw InvalidInput("log statistic evaluated at x <= 0");
            return std::log(xd);
        case Kind::Table: {
            const auto hi = lo + static_cast<std::int64_t>(values.size()) - 1;
            if (x < lo || x > hi) throw InvalidInput("explicit statistic table does not cover x = " + std::to_string(x));
            return values[static_cast<std::size_t>(x - lo)];
        }
    }
    return 0.0;
}

Vec SufficientStats::eval(std::int64_t x) const {
    Vec t(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) t[i] = coords[i].eval(x);
    return t;
}

double SufficientStats::energy(const ParamVector& a, std::int64_t x) const {
    double e = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (a[i] != 0.0) e += a[i] * coords[i].eval(x);
    return e;
}

bool SufficientStats::has_table() const {
    return std::any_of(coords.begin(), coords.end(), [](const StatCoord& c) { return c.kind == StatCoord::Kind::Table; });
}

std::int64_t SufficientStats::support_lo() const {
    std::int64_t lo = support == Support::Integers ? kNoLowerBound : (support == Support::NonNegative ? 0 : 1);
    for (const auto& c : coords)
        if (c.kind == StatCoord::Kind::Table) lo = std::max(lo, c.lo);
    return lo;
}

std::optional<std::int64_t> SufficientStats::support_hi() const {
    std::optional<std::int64_t> hi;
    for (const auto& c : coords)
        if (c.kind == StatCoord::Kind::Table) {
            const auto h = c.lo + static_cast<std::int64_t>(c.values.size()) - 1;
            hi = hi ? std::min(*hi, h) : h;
        }
    return hi;
}

void ExpFamilySpec::validate() const {
    const std::size_t k = T.dim();
    if (k == 0) throw InvalidInput("family: sufficient statistic has no coordinates");
    for (const auto& c : T.coords)
        if (c.kind == StatCoord::Kind::Log && T.support != Support::Positive)
            throw InvalidInput("family: log statistic requires support on the positive integers");
    if (cone.dim != k) throw InvalidInput("family: cone dimension does not match T");
    if (base_region.dim() != k) throw InvalidInput("family: base region dimension does not match T");
    if (!(rho > 0.0) || !(L >= 0.0) || !(B > 0.0) || !(gamma > 0.0) || !(Lambda > 0.0))
        throw InvalidInput("family: rho, B, gamma, Lambda must be positive and L non-negative");
    if (theta && !(*theta > 0.0)) throw InvalidInput("family: theta must be positive");
    if (auto hi = T.support_hi(); hi && *hi < T.support_lo()) throw InvalidInput("family: empty support");
    for (const auto& c : base_region.corners())
        if (!cone.contains(c)) throw InvalidInput("family: base region leaves the cone at " + vec_str(c));
}

double ExpFamilySpec::theta_value() const {
    return theta ? *theta : theta_for_cone(cone).theta;
}

bool ExpFamilySpec::in_rho_cone(const ParamVector& a) const {
    return a.size() == dim() && rho_cone_contains(cone, base_region, rho, a);
}

IntRange mode_scan_window(const ExpFamilySpec& spec, const Constants& k) {
    const auto lc = static_cast<std::int64_t>(std::max(0.0, std::ceil(spec.L)));
    const std::int64_t delta = 8 * lc + k.mode_scan_extra;
    IntRange w{-lc - delta, lc + delta};
    w.lo = std::max(w.lo, spec.T.support_lo());
    if (auto hi = spec.T.support_hi()) w.hi = std::min(w.hi, *hi);
    if (w.hi < w.lo) throw InvalidInput("mode scan window misses the support");
    return w;
}

std::vector<std::int64_t> minimizers(const ExpFamilySpec& spec, const ParamVector& a, IntRange window) {
    window.lo = std::max(window.lo, spec.T.support_lo());
    if (auto hi = spec.T.support_hi()) window.hi = std::min(window.hi, *hi);
    if (window.hi < window.lo) throw InvalidInput("minimizers: window misses the support");
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(window.hi - window.lo + 1));
    for (auto x = window.lo; x <= window.hi; ++x) e.push_back(spec.T.energy(a, x));
    const double best = *std::min_element(e.begin(), e.end());
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] <= best + tol) out.push_back(window.lo + static_cast<std::int64_t>(i));
    return out;
}

std::vector<std::int64_t> mode(const ExpFamilySpec& spec, const ParamVector& a, const Constants& k) {
    if (!spec.in_rho_cone(a)) throw InvalidInput("mode: parameter " + vec_str(a) + " is outside the rho-cone");
    auto ms = minimizers(spec, a, mode_scan_window(spec, k));
    for (auto m : ms)
        if (std::abs(static_cast<double>(m)) > spec.L + 1e-12)
            throw AssumptionViolation("mode " + std::to_string(m) + " of " + vec_str(a) + " lies outside [-L, L]");
    return ms;
}

namespace {

struct SideCoefs {
    double alpha = 0.0;  // linear
    double beta = 0.0;   // quadratic
    double gamma = 0.0;  // logarithmic
};

// a . T(x) for x > 0 equals alpha x + beta x^2 + gamma ln x.
SideCoefs right_coefs(const SufficientStats& T, const ParamVector& a) {
    SideCoefs c;
    for (std::size_t i = 0; i < T.dim(); ++i) {
        switch (T.coords[i].kind) {
            case StatCoord::Kind::Identity:
            case StatCoord::Kind::Abs: c.alpha += a[i]; break;
            case StatCoord::Kind::Square: c.beta += a[i]; break;
            case StatCoord::Kind::Log: c.gamma += a[i]; break;
            case StatCoord::Kind::Table: break;
        }
    }
    return c;
}

// a . T(-y) for y > 0.
SideCoefs left_coefs(const SufficientStats& T, const ParamVector& a) {
    SideCoefs c;
    for (std::size_t i = 0; i < T.dim(); ++i) {
        switch (T.coords[i].kind) {
            case StatCoord::Kind::Identity: c.alpha -= a[i]; break;
            case StatCoord::Kind::Abs: c.alpha += a[i]; break;
            case StatCoord::Kind::Square: c.beta += a[i]; break;
            default: break;
        }
    }
    return c;
}

bool divergent(const SideCoefs& c) {
    if (c.beta < 0.0) return true;
    if (c.beta == 0.0 && c.alpha < 0.0) return true;
    if (c.beta == 0.0 && c.alpha == 0.0 && c.gamma <= 1.0) return true;
    return false;
}

// Upper bound on sum_{y >= y0} exp(-(g(y) - fM)) where g has coefficients c
// and w0 = exp(-(g(y0) - fM)). Infinity when no certificate exists at y0.
double side_tail(const SideCoefs& c, double y0, double w0) {
    if (y0 < 1.0) return std::numeric_limits<double>::infinity();
    if (c.beta > 0.0 || c.alpha > 0.0) {
        // g' >= d on [y0, inf): for gamma <= 0, g is convex so g' >= g'(y0);
        // otherwise drop the positive gamma / y term
        const double d = c.gamma > 0.0 ? c.alpha + 2.0 * c.beta * y0 : c.alpha + 2.0 * c.beta * y0 + c.gamma / y0;
        if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
        return w0 / (-std::expm1(-d));
    }
    // pure power law y^-gamma: first term plus the integral from y0
    return w0 * (1.0 + y0 / (c.gamma - 1.0));
}

PMFTable build_member(const ExpFamilySpec& spec, const ParamVector& a, double tail_target, const Constants& k,
                      std::size_t cap) {
    if (a.size() != spec.dim()) throw InvalidInput("pmf: parameter has wrong dimension");
    if (!(tail_target > 0.0) || !(tail_target < 0.5)) throw InvalidInput("pmf: tail target must lie in (0, 0.5)");
    const auto& T = spec.T;
    const auto ms = minimizers(spec, a, mode_scan_window(spec, k));
    const std::int64_t m = ms.front();
    const double fm = T.energy(a, m);
    const std::int64_t slo = T.support_lo();
    const auto shi = T.support_hi();
    const SideCoefs rc = right_coefs(T, a);
    const SideCoefs lc = left_coefs(T, a);
    if (!shi && divergent(rc)) throw AssumptionViolation("pmf: weights do not decay to the right for " + vec_str(a));
    if (!T.bounded_below() && divergent(lc))
        throw AssumptionViolation("pmf: weights do not decay to the left for " + vec_str(a));

    std::int64_t w = 32;
    while (true) {
        const std::int64_t left = std::max(m - w, slo);
        const std::int64_t right = shi ? std::min(m + w, *shi) : m + w;
        const auto size = static_cast<std::size_t>(right - left + 1);
        if (size > cap) throw WindowOverflow("pmf: window exceeds cap before the tail certificate holds");
        std::vector<double> weights(size);
        double z = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            weights[i] = std::exp(-(T.energy(a, left + static_cast<std::int64_t>(i)) - fm));
            z += weights[i];
        }
        double tail = 0.0;
        if (!(shi && right == *shi)) {
            const std::int64_t x0 = right + 1;
            tail += side_tail(rc, static_cast<double>(x0), std::exp(-(T.energy(a, x0) - fm)));
        }
        if (!(T.bounded_below() && left == slo)) {
            const std::int64_t x0 = left - 1;
            tail += side_tail(lc, static_cast<double>(-x0), std::exp(-(T.energy(a, x0) - fm)));
        }
        if (std::isfinite(tail) && tail <= tail_target * z) {
            for (double& v : weights) v /= z;
            return PMFTable{left, std::move(weights), tail / z};
        }
        if (w > (std::int64_t{1} << 40)) throw WindowOverflow("pmf: window growth did not converge");
        w *= 2;
    }
}

}  // namespace

PMFTable pmf_member(const ExpFamilySpec& spec, const ParamVector& a, double tail_target, const Constants& k,
                    std::size_t cap) {
    mode(spec, a, k);
    return build_member(spec, a, tail_target, k, cap);
}

PMFTable pmf_member_unchecked(const ExpFamilySpec& spec, const ParamVector& a, double tail_target, const Constants& k,
                              std::size_t cap) {
    return build_member(spec, a, tail_target, k, cap);
}

std::int64_t tail_radius(const TailRadiusParams& p) {
    const double denom = 3.0 - p.eta - p.s;
    if (!(denom > 0.0)) throw InvalidInput("tail_radius: need eta + s < 3");
    if (!(p.B > 0.0) || !(p.c_tail > 0.0)) throw InvalidInput("tail_radius: B and c_tail must be positive");
    const double v = p.c_tail * std::exp(p.kappa / denom) * std::pow(p.B, 5.0 / (4.0 * denom));
    return static_cast<std::int64_t>(std::ceil(v - 1e-12));
}

double structural_distance(const ExpFamilySpec& spec, const ParamVector& a, const ParamVector& b, IntRange window,
                           const Constants& k) {
    if (!spec.in_rho_cone(a) || !spec.in_rho_cone(b))
        throw InvalidInput("structural distance: parameters must lie in the rho-cone");
    if (auto hi = spec.T.support_hi(); hi && (window.hi > *hi || window.lo < spec.T.support_lo()))
        throw InvalidInput("structural distance: window exceeds the explicit statistic tables");
    window.lo = std::max(window.lo, spec.T.support_lo());
    if (window.hi < window.lo) throw InvalidInput("structural distance: empty window");

    const auto scan = mode_scan_window(spec, k);
    const auto ma = minimizers(spec, a, scan);
    const auto mb = minimizers(spec, b, scan);
    if (ma != mb) return 1.0;

    const double fa = spec.T.energy(a, ma.front());
    const double fb = spec.T.energy(b, mb.front());
    double eps = 0.0;
    for (auto x = window.lo; x <= window.hi; ++x) {
        const double ra = std::exp(-(spec.T.energy(a, x) - fa));
        const double rb = std::exp(-(spec.T.energy(b, x) - fb));
        if (std::abs(ra - rb) <= 1e-9 * std::max(ra, rb)) continue;
        eps = std::max({eps, ra, rb});
    }
    return std::min(eps, 1.0);
}

bool AssumptionReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const AssumptionEntry& e) { return e.passed; });
}

Matrix stat_covariance(const SufficientStats& T, const PMFTable& p) {
    const std::size_t k = T.dim();
    const double total = p.mass();
    Vec mean(k, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.probs[i] == 0.0) continue;
        const Vec t = T.eval(p.lo + static_cast<std::int64_t>(i));
        for (std::size_t c = 0; c < k; ++c) mean[c] += p.probs[i] * t[c];
    }
    for (double& v : mean) v /= total;
    Matrix cov(k, k);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.probs[i] == 0.0) continue;
        const Vec d = sub(T.eval(p.lo + static_cast<std::int64_t>(i)), mean);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c) cov(r, c) += p.probs[i] * d[r] * d[c];
    }
    for (double& v : cov.data) v /= total;
    return cov;
}

double stat_covariance_max_eig(const SufficientStats& T, const PMFTable& p) {
    return max_eigenvalue_psd(stat_covariance(T, p));
}

AssumptionReport verify_assumptions(const ExpFamilySpec& spec, const std::vector<ParamVector>& samples,
                                    IntRange window, const Constants& k) {
    AssumptionEntry unimodal{"unimodal", true, "", ""};
    AssumptionEntry modes{"modes_in_range", true, "", ""};
    AssumptionEntry fourth{"fourth_moment_bound", true, "", ""};
    AssumptionEntry cov{"covariance_bound", true, "", ""};
    AssumptionEntry var{"variance_floor", true, "", ""};
    double worst_fourth = 0.0, worst_cov = 0.0, worst_var = std::numeric_limits<double>::infinity();

    auto fail = [](AssumptionEntry& e, const std::string& witness, const std::string& detail) {
        if (e.passed) {
            e.passed = false;
            e.witness = witness;
            e.detail = detail;
        }
    };

    IntRange scan = mode_scan_window(spec, k);
    scan.lo = std::min(scan.lo, window.lo);
    scan.hi = std::max(scan.hi, window.hi);

    std::vector<ParamVector> hull_points = samples;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) hull_points.push_back(scale(add(samples[i], samples[i + 1]), 0.5));

    for (std::size_t idx = 0; idx < hull_points.size(); ++idx) {
        const auto& a = hull_points[idx];
        const bool is_sample = idx < samples.size();
        const std::string w = "a=" + vec_str(a);
        PMFTable p;
        try {
            p = pmf_member_unchecked(spec, a, 1e-12, k);
        } catch (const Error& e) {
            fail(is_sample ? unimodal : cov, w, e.what());
            continue;
        }
        if (is_sample) {
            const auto mi = modes_of(p);
            if (!mi.unimodal) fail(unimodal, w, "pmf is not unimodal");
            for (auto m : minimizers(spec, a, scan))
                if (std::abs(static_cast<double>(m)) > spec.L + 1e-12)
                    fail(modes, w + " mode=" + std::to_string(m), "mode outside [-L, L]");
            const auto mo = moments(p);
            worst_fourth = std::max(worst_fourth, mo.fourth);
            if (mo.fourth > spec.B * (1.0 + 1e-9)) fail(fourth, w, "fourth central moment " + std::to_string(mo.fourth));
            if (spec.base_region.contains(a)) {
                worst_var = std::min(worst_var, mo.variance);
                if (mo.variance < spec.gamma * (1.0 - 1e-9)) fail(var, w, "variance " + std::to_string(mo.variance));
            }
        }
        const double eig = stat_covariance_max_eig(spec.T, p);
        worst_cov = std::max(worst_cov, eig);
        if (eig > spec.Lambda * (1.0 + 1e-9)) fail(cov, w, "covariance eigenvalue " + std::to_string(eig));
    }
    if (fourth.passed) fourth.detail = "max fourth central moment " + std::to_string(worst_fourth);
    if (cov.passed) cov.detail = "max covariance eigenvalue " + std::to_string(worst_cov);
    if (var.passed && std::isfinite(worst_var)) var.detail = "min variance " + std::to_string(worst_var);
    return AssumptionReport{{unimodal, modes, fourth, cov, var}};
}

PartitionCheck partition_bound_check(const ExpFamilySpec& spec, const ParamVector& a, const Constants& k) {
    const auto ms = minimizers(spec, a, mode_scan_window(spec, k));
    const PMFTable p = pmf_member_unchecked(spec, a, 1e-12, k);
    PartitionCheck r;
    r.value = (1.0 + p.tail_bound) / p.at(ms.front());
    r.bound = k.c_part * std::pow(spec.B, 0.25);
    r.holds = r.value <= r.bound;
    return r;
}

}  // namespace siirv
