#include <cmath>
#include <limits>

#include "siirv/covers.hpp"
#include "siirv/error.hpp"

namespace siirv {

namespace {

struct Polyline {
    std::vector<Vec> pts;
    std::vector<double> cum;  // arc length at each vertex

    explicit Polyline(const std::vector<Vec>& p) : pts(p), cum(p.size(), 0.0) {
        for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
    }
    double length() const { return cum.back(); }
    Vec at(double t) const {
        if (pts.size() == 1 || t <= 0.0) return pts.front();
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (t <= cum[i] || i + 1 == pts.size()) {
                const double seg = cum[i] - cum[i - 1];
                const double f = seg > 0.0 ? std::min(1.0, (t - cum[i - 1]) / seg) : 0.0;
                return axpy(pts[i - 1], f, sub(pts[i], pts[i - 1]));
            }
        }
        return pts.back();
    }
};

}  // namespace

MomentMatch moment_match(double mean, double var, const ExpFamilySpec& spec, const std::vector<Vec>& path,
                         const Constants& k) {
    if (!(var > 0.0)) throw InvalidInput("moment_match: target variance must be positive");
    if (path.empty()) throw InvalidInput("moment_match: empty path");
    const Polyline line(path);
    const double ratio = mean != 0.0 ? var / mean : 0.0;

    // zero exactly where Var_b / E_b equals the target ratio (or E_b = 0 for a centred target);
    // written without division so the sign is meaningful for either sign of the mean
    auto eval = [&](double t, Moments& mo) {
        mo = moments(pmf_member(spec, line.at(t), 1e-14, k));
        return mean != 0.0 ? mo.variance - ratio * mo.mean : mo.mean;
    };

    const int probes = 128;
    Moments mo;
    double t_lo = 0.0, t_hi = 0.0;
    double h_lo = eval(0.0, mo);
    bool bracketed = h_lo == 0.0;
    if (bracketed) t_hi = 0.0;
    for (int i = 1; i <= probes && !bracketed; ++i) {
        const double t = line.length() * i / probes;
        const double h = eval(t, mo);
        if (h == 0.0 || (h > 0.0) != (h_lo > 0.0)) {
            t_hi = t;
            if (h == 0.0) t_lo = t;
            bracketed = true;
        } else {
            t_lo = t;
            h_lo = h;
        }
    }
    if (!bracketed) throw BracketFailure("moment_match: variance-to-mean ratio is not attained on the path");

    int steps = 0;
    while (t_hi - t_lo > 1e-15 * std::max(1.0, line.length()) && steps < 200) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (mid <= t_lo || mid >= t_hi) break;
        const double h = eval(mid, mo);
        ++steps;
        if (h == 0.0) {
            t_lo = t_hi = mid;
            break;
        }
        if ((h > 0.0) == (h_lo > 0.0)) {
            t_lo = mid;
            h_lo = h;
        } else {
            t_hi = mid;
        }
    }
    MomentMatch out;
    out.b = line.at(t_hi);
    eval(t_hi, mo);
    out.mean_b = mo.mean;
    out.var_b = mo.variance;
    out.steps = steps;
    out.m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(var / mo.variance)));
    // bisection round-off can leave var / Var_b a hair above an integer
    if (out.m > 1 && static_cast<double>(out.m - 1) * mo.variance >= var - 1e-9) --out.m;
    return out;
}

}  // namespace siirv
