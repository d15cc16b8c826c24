#include "siirv/cone.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "siirv/error.hpp"

namespace siirv {

namespace {

constexpr double kZeroProduct = 1e-12;

}  // namespace

ConeDescription ConeDescription::make(std::size_t dim, std::vector<Vec> H, std::vector<Vec> Z) {
    ConeDescription c;
    c.dim = dim;
    for (auto& h : H)
        if (h.size() != dim) throw InvalidInput("cone: halfspace normal has wrong dimension");
    for (auto& z : Z) {
        if (z.size() != dim) throw InvalidInput("cone: generator has wrong dimension");
        const double n = norm(z);
        if (n == 0.0) throw InvalidInput("cone: zero generator");
        z = scale(z, 1.0 / n);
    }
    for (const auto& h : H)
        for (const auto& z : Z)
            if (dot(h, z) < -1e-10) throw InvalidInput("cone: generator violates a halfspace");
    c.H = std::move(H);
    c.Z = std::move(Z);
    return c;
}

ConeDescription ConeDescription::ray(const Vec& dir) {
    // dir plus both signs of an orthonormal basis of its complement
    const std::size_t k = dir.size();
    std::vector<Vec> H{dir};
    std::vector<Vec> basis{scale(dir, 1.0 / norm(dir))};
    for (std::size_t e = 0; e < k && basis.size() < k; ++e) {
        Vec v(k, 0.0);
        v[e] = 1.0;
        for (const auto& b : basis) v = axpy(v, -dot(v, b), b);
        const double n = norm(v);
        if (n < 1e-8) continue;
        v = scale(v, 1.0 / n);
        basis.push_back(v);
        H.push_back(v);
        H.push_back(scale(v, -1.0));
    }
    return make(k, std::move(H), {dir});
}

bool ConeDescription::contains(const Vec& a, double tol) const {
    const double scale_tol = tol * std::max(1.0, norm(a));
    for (const auto& h : H)
        if (dot(h, a) < -scale_tol * std::max(1.0, norm(h))) return false;
    return true;
}

ThetaResult theta_for_cone(const ConeDescription& cone) {
    const std::size_t s = cone.Z.size();
    if (s == 0) throw DegenerateCone("cone is {0}");
    ThetaResult r;

    double theta1 = std::numeric_limits<double>::infinity();
    for (const auto& h : cone.H)
        for (const auto& z : cone.Z) {
            const double p = dot(h, z);
            if (p > kZeroProduct) theta1 = std::min(theta1, p);
        }
    r.all_orthogonal = !std::isfinite(theta1);

    auto zx = [&](const Vec& x) {
        Vec acc(cone.dim, 0.0);
        for (std::size_t j = 0; j < s; ++j) acc = axpy(acc, x[j], cone.Z[j]);
        return acc;
    };
    r.x.assign(s, 1.0);
    if (norm(zx(r.x)) <= kZeroProduct) {
        // opposite generators cancel; break the symmetry one entry at a time
        bool fixed = false;
        for (std::size_t j = 0; j < s && !fixed; ++j) {
            r.x[j] = 2.0;
            if (norm(zx(r.x)) > kZeroProduct) fixed = true;
        }
        for (std::size_t j = 0; j < s && !fixed; ++j) r.x[j] = std::ldexp(1.0, static_cast<int>(j));
    }

    if (s <= 16) {
        // exact max over subsets, walking subsets in Gray-code order
        Vec acc(cone.dim, 0.0);
        double best = 0.0;
        std::uint32_t prev = 0;
        for (std::uint32_t g = 1; g < (1u << s); ++g) {
            const std::uint32_t gray = g ^ (g >> 1);
            const std::uint32_t flip = gray ^ prev;
            const auto j = static_cast<std::size_t>(std::countr_zero(flip));
            acc = axpy(acc, (gray & flip) ? r.x[j] : -r.x[j], cone.Z[j]);
            best = std::max(best, norm(acc));
            prev = gray;
        }
        r.N = 2.0 * best;
    } else {
        double sx = 0.0;
        for (double v : r.x) sx += v;
        r.N = 2.0 * sx;
    }
    r.w = scale(zx(r.x), 1.0 / r.N);

    if (r.all_orthogonal) {
        r.theta1 = 0.0;
        r.theta = 0.5;
        return r;
    }
    r.theta1 = theta1;
    r.theta = std::min(theta1 / r.N, theta1 / (2.0 * static_cast<double>(s)));
    return r;
}

namespace {

bool try_project(const ConeDescription& cone, const ThetaResult& th, const Vec& coef, const Vec& u, double r,
                 double theta, ProjectionCertificate& out) {
    const std::size_t s = cone.Z.size();
    out.theta_used = theta;
    out.active_set.clear();
    for (std::size_t i = 0; i < cone.H.size(); ++i)
        if (dot(cone.H[i], u) < theta * r) out.active_set.push_back(i);

    std::vector<bool> in_j(s, true);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i : out.active_set)
            if (std::abs(dot(cone.H[i], cone.Z[j])) > kZeroProduct) in_j[j] = false;

    // v = (u - u_I) + r w_I, built from coefficients so no large terms cancel
    Vec u_i(cone.dim, 0.0), w_i(cone.dim, 0.0), rest(cone.dim, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
        if (in_j[j]) {
            u_i = axpy(u_i, coef[j], cone.Z[j]);
            w_i = axpy(w_i, th.x[j] / th.N, cone.Z[j]);
        } else {
            rest = axpy(rest, coef[j], cone.Z[j]);
        }
    }
    const Vec v = axpy(rest, r, w_i);
    const Vec d = axpy(u_i, -r, w_i);

    // |v + t d| = r with t = 1 - c; the largest admissible t is the smallest c
    const double a = dot(d, d);
    const double b = dot(v, d);
    const double cc = dot(v, v) - r * r;
    double t;
    if (norm(u) <= r) {
        t = 1.0;
    } else {
        if (cc > 0.0 || a == 0.0) return false;
        const double disc = b * b - a * cc;
        if (disc < 0.0) return false;
        const double sq = std::sqrt(disc);
        t = b > 0.0 ? -cc / (b + sq) : (sq - b) / a;
        if (!(t >= 0.0) || t > 1.0 + 1e-12) return false;
        t = std::min(t, 1.0);
    }
    out.c = 1.0 - t;
    out.u_prime = axpy(v, t, d);
    if (t == 1.0) out.u_prime = u;
    return true;
}

}  // namespace

ProjectionCertificate project_to_sphere(const ConeDescription& cone, const ThetaResult& th, const Vec& u, double r) {
    if (!(r > 0.0)) throw InvalidInput("projection: radius must be positive");
    const double nu = norm(u);
    if (nu < r * (1.0 - 1e-12)) throw InvalidInput("projection: |u| must be at least r");
    const NnlsResult dec = nnls(cone.Z, u);
    if (dec.residual > 1e-9 * std::max(1.0, nu))
        throw InvalidInput("projection: u is not in the cone (decomposition residual too large)");

    double theta = th.theta;
    ProjectionCertificate cert;
    for (int attempt = 0; attempt <= 10; ++attempt) {
        if (try_project(cone, th, dec.coef, u, r, theta, cert)) {
            cert.retries = attempt;
            if (certificate_holds(cone, cert, u, r)) return cert;
        }
        theta *= 0.5;
    }
    throw InfeasibleProjection("projection: no admissible step after 10 halvings of theta");
}

bool certificate_holds(const ConeDescription& cone, const ProjectionCertificate& cert, const Vec& u, double r,
                       double tol) {
    if (cert.u_prime.size() != u.size()) return false;
    if (std::abs(norm(cert.u_prime) - r) > tol * std::max(1.0, r)) return false;
    const double tr = cert.theta_used * r;
    for (const auto& h : cone.H) {
        const double slack = tol * std::max(1.0, norm(h)) * (1.0 + norm(u));
        const double hu = dot(h, u);
        const double hv = dot(h, cert.u_prime);
        if (hv < -slack) return false;
        const bool far = hu >= tr - slack && hv >= tr - slack;
        const bool same = std::abs(hu - hv) <= slack;
        if (!far && !same) return false;
    }
    return true;
}

}  // namespace siirv
