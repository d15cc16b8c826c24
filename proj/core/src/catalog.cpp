#include "siirv/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siirv/error.hpp"

namespace siirv::catalog {

namespace {

std::vector<Vec> scan_directions(const ConeDescription& cone, int steps) {
    std::vector<Vec> dirs = cone.Z;
    for (std::size_t i = 0; i < cone.Z.size(); ++i)
        for (std::size_t j = i + 1; j < cone.Z.size(); ++j)
            for (int t = 1; t < steps; ++t) {
                const double f = static_cast<double>(t) / steps;
                Vec d = add(scale(cone.Z[i], 1.0 - f), scale(cone.Z[j], f));
                const double n = norm(d);
                if (n > 1e-12) dirs.push_back(scale(d, 1.0 / n));
            }
    return dirs;
}

// Smallest norm of a midpoint of two unit generators: a lower bound on how
// close the hull of rho-sphere points gets to the origin, relative to rho.
double hull_shrink(const ConeDescription& cone) {
    double h = 1.0;
    for (std::size_t i = 0; i < cone.Z.size(); ++i)
        for (std::size_t j = i + 1; j < cone.Z.size(); ++j) h = std::min(h, 0.5 * norm(add(cone.Z[i], cone.Z[j])));
    return h;
}

std::vector<Vec> region_grid(const Region& region, int per_axis) {
    std::vector<Vec> out;
    const std::size_t k = region.dim();
    std::vector<int> idx(k, 0);
    while (true) {
        Vec a(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double f = per_axis > 1 ? static_cast<double>(idx[i]) / (per_axis - 1) : 0.5;
            a[i] = region.box_lo()[i] + f * (region.box_hi()[i] - region.box_lo()[i]);
        }
        if (region.contains(a, 1e-9)) out.push_back(a);
        std::size_t p = 0;
        while (p < k && ++idx[p] == per_axis) idx[p++] = 0;
        if (p == k) break;
    }
    for (const auto& c : region.corners()) out.push_back(c);
    return out;
}

ExpFamilySpec one_dim(StatCoord coord, Support support, double a_lo, double a_hi, double L) {
    if (!(a_lo > 0.0) || a_hi < a_lo) throw InvalidInput("catalog: need 0 < a_lo <= a_hi");
    ExpFamilySpec s;
    s.T.coords = {std::move(coord)};
    s.T.support = support;
    s.cone = ConeDescription::ray({1.0});
    s.base_region = Region(Box{{a_lo}, {a_hi}});
    s.rho = a_lo;
    s.L = L;
    return s;
}

}  // namespace

void fit_constants(ExpFamilySpec& spec, const FitOptions& opt, const Constants& k) {
    const double top = opt.norm_span * std::max(spec.rho, spec.base_region.max_norm());
    const double h = hull_shrink(spec.cone);
    double b = 0.0, lam = 0.0, gam = std::numeric_limits<double>::infinity();

    auto visit = [&](const Vec& a, bool in_rho_cone) {
        const PMFTable p = pmf_member_unchecked(spec, a, 1e-13, k);
        if (in_rho_cone) b = std::max(b, moments(p).fourth);
        lam = std::max(lam, stat_covariance_max_eig(spec.T, p));
    };

    for (const auto& d : scan_directions(spec.cone, opt.directions)) {
        const double r0 = spec.rho * h;
        const double ratio = std::pow(top / r0, 1.0 / opt.norm_steps);
        for (int i = 0; i <= opt.norm_steps; ++i) {
            const Vec a = scale(d, r0 * std::pow(ratio, i));
            visit(a, spec.in_rho_cone(a));
        }
        visit(scale(d, spec.rho), true);
    }
    for (const auto& a : region_grid(spec.base_region, opt.region_grid)) {
        visit(a, true);
        gam = std::min(gam, moments(pmf_member_unchecked(spec, a, 1e-13, k)).variance);
    }
    spec.B = b * (1.0 + opt.margin);
    spec.Lambda = lam * (1.0 + opt.margin);
    spec.gamma = gam * (1.0 - opt.margin);
}

ExpFamilySpec geometric(double a_lo, double a_hi) {
    auto s = one_dim(StatCoord::catalog("x"), Support::NonNegative, a_lo, a_hi, 1.0);
    // moments are decreasing in a, so the extremes sit at the region ends
    s.B = geometric_fourth_central(a_lo) * 1.05;
    s.Lambda = geometric_variance(a_lo) * 1.05;
    s.gamma = geometric_variance(a_hi) * 0.95;
    return s;
}

ExpFamilySpec zeta(double a_lo, double a_hi) {
    if (!(a_lo > 5.0)) throw InvalidInput("zeta family needs a > 5 for a finite fourth moment");
    auto s = one_dim(StatCoord::catalog("log"), Support::Positive, a_lo, a_hi, 1.0);
    fit_constants(s);
    return s;
}

ExpFamilySpec laplacian(double a_lo, double a_hi) {
    auto s = one_dim(StatCoord::catalog("abs"), Support::Integers, a_lo, a_hi, 1.0);
    fit_constants(s);
    return s;
}

ExpFamilySpec discrete_gaussian(const Box& box) {
    ExpFamilySpec s;
    s.T.coords = {StatCoord::catalog("x"), StatCoord::catalog("x2")};
    s.T.support = Support::Integers;
    const double r = 1.0 / std::sqrt(2.0);
    s.cone = ConeDescription::make(2, {{r, r}, {-r, r}}, {{-1.0, 1.0}, {1.0, 1.0}});
    s.base_region = Region(box);
    // distance from the origin to the box
    Vec nearest(2);
    for (std::size_t i = 0; i < 2; ++i) nearest[i] = std::clamp(0.0, box.lo[i], box.hi[i]);
    s.rho = norm(nearest);
    if (!(s.rho > 0.0)) throw InvalidInput("discrete gaussian: box must avoid the origin");
    s.L = 1.0;
    fit_constants(s);
    s.validate();
    return s;
}

double geometric_mean(double a) {
    const double q = std::exp(-a);
    return q / (1.0 - q);
}

double geometric_variance(double a) {
    const double q = std::exp(-a);
    return q / ((1.0 - q) * (1.0 - q));
}

double geometric_fourth_central(double a) {
    const double q = std::exp(-a);
    const double om = 1.0 - q;
    return q * (1.0 + 7.0 * q + q * q) / (om * om * om * om);
}

}  // namespace siirv::catalog
