#include "siirv/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siirv/error.hpp"

namespace siirv {

namespace {

double segment_distance(const Vec& p, const Vec& q, const Vec& a) {
    const Vec d = sub(q, p);
    const double dd = dot(d, d);
    double t = dd > 0.0 ? dot(sub(a, p), d) / dd : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(axpy(p, t, d), a);
}

// Enumerates vertices of {A x <= b} by solving every k-subset of constraints.
std::vector<Vec> polytope_vertices(const Polytope& poly, std::size_t k) {
    std::vector<Vec> out;
    const std::size_t m = poly.A.size();
    if (m < k) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::vector<Vec> rows;
        Vec rhs;
        for (auto i : idx) {
            rows.push_back(poly.A[i]);
            rhs.push_back(poly.b[i]);
        }
        if (auto x = solve_square(rows, rhs)) {
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i)
                if (dot(poly.A[i], *x) > poly.b[i] + 1e-9 * std::max(1.0, std::abs(poly.b[i]))) ok = false;
            if (ok) {
                bool dup = false;
                for (const auto& v : out)
                    if (distance(v, *x) < 1e-9) dup = true;
                if (!dup) out.push_back(*x);
            }
        }
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

}  // namespace

Region::Region(Shape shape) : shape_(std::move(shape)) {
    if (const auto* box = std::get_if<Box>(&shape_)) {
        if (box->lo.size() != box->hi.size() || box->lo.empty()) throw InvalidInput("box: bad dimensions");
        dim_ = box->lo.size();
        for (std::size_t i = 0; i < dim_; ++i)
            if (box->lo[i] > box->hi[i]) throw InvalidInput("box: lo exceeds hi");
        bb_lo_ = box->lo;
        bb_hi_ = box->hi;
        for (std::size_t mask = 0; mask < (std::size_t{1} << dim_); ++mask) {
            Vec c(dim_);
            for (std::size_t i = 0; i < dim_; ++i) c[i] = (mask >> i & 1) ? box->hi[i] : box->lo[i];
            corners_.push_back(c);
        }
    } else if (const auto* poly = std::get_if<Polytope>(&shape_)) {
        if (poly->A.empty() || poly->A.size() != poly->b.size()) throw InvalidInput("polytope: bad dimensions");
        dim_ = poly->A[0].size();
        corners_ = polytope_vertices(*poly, dim_);
        if (corners_.empty()) throw InvalidInput("polytope: empty or unbounded");
    } else {
        const auto& segs = std::get<SegmentList>(shape_).segments;
        if (segs.empty()) throw InvalidInput("segment list: empty");
        dim_ = segs[0].first.size();
        for (const auto& [p, q] : segs) {
            if (p.size() != dim_ || q.size() != dim_) throw InvalidInput("segment list: bad dimensions");
            corners_.push_back(p);
            corners_.push_back(q);
        }
    }
    if (bb_lo_.empty()) {
        bb_lo_.assign(dim_, std::numeric_limits<double>::infinity());
        bb_hi_.assign(dim_, -std::numeric_limits<double>::infinity());
        for (const auto& c : corners_)
            for (std::size_t i = 0; i < dim_; ++i) {
                bb_lo_[i] = std::min(bb_lo_[i], c[i]);
                bb_hi_[i] = std::max(bb_hi_[i], c[i]);
            }
    }
}

bool Region::contains(const Vec& a, double tol) const {
    if (a.size() != dim_) return false;
    if (const auto* box = std::get_if<Box>(&shape_)) {
        for (std::size_t i = 0; i < dim_; ++i) {
            const double t = tol * std::max(1.0, std::abs(a[i]));
            if (a[i] < box->lo[i] - t || a[i] > box->hi[i] + t) return false;
        }
        return true;
    }
    if (const auto* poly = std::get_if<Polytope>(&shape_)) {
        for (std::size_t i = 0; i < poly->A.size(); ++i)
            if (dot(poly->A[i], a) > poly->b[i] + tol * std::max(1.0, std::abs(poly->b[i]))) return false;
        return true;
    }
    for (const auto& [p, q] : std::get<SegmentList>(shape_).segments)
        if (segment_distance(p, q, a) <= tol * std::max(1.0, norm(a))) return true;
    return false;
}

double Region::max_norm() const {
    // norm is convex, so the maximum over a polytope or segment sits at a corner
    double m = 0.0;
    for (const auto& c : corners_) m = std::max(m, norm(c));
    return m;
}

Vec Region::sample(Rng& rng) const {
    if (std::holds_alternative<SegmentList>(shape_)) {
        const auto& segs = std::get<SegmentList>(shape_).segments;
        double total = 0.0;
        for (const auto& [p, q] : segs) total += distance(p, q);
        double pick = rng.uniform() * total;
        for (const auto& [p, q] : segs) {
            const double len = distance(p, q);
            if (pick <= len || &q == &segs.back().second) {
                const double t = len > 0.0 ? std::clamp(pick / len, 0.0, 1.0) : 0.0;
                return axpy(p, t, sub(q, p));
            }
            pick -= len;
        }
        return segs.front().first;
    }
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec a(dim_);
        for (std::size_t i = 0; i < dim_; ++i) a[i] = rng.uniform(bb_lo_[i], bb_hi_[i]);
        if (contains(a)) return a;
    }
    throw InvalidInput("region: rejection sampling failed");
}

std::vector<Vec> Region::path() const {
    if (const auto* box = std::get_if<Box>(&shape_)) return {box->lo, box->hi};
    if (std::holds_alternative<Polytope>(shape_)) {
        auto by_norm = [](const Vec& x, const Vec& y) { return norm(x) < norm(y); };
        const auto [mn, mx] = std::minmax_element(corners_.begin(), corners_.end(), by_norm);
        return {*mn, *mx};
    }
    std::vector<Vec> out;
    for (const auto& [p, q] : std::get<SegmentList>(shape_).segments) {
        if (out.empty() || distance(out.back(), p) > 1e-12) out.push_back(p);
        out.push_back(q);
    }
    return out;
}

bool rho_cone_contains(const ConeDescription& cone, const Region& region, double rho, const Vec& a) {
    if (region.contains(a)) return true;
    return cone.contains(a) && norm(a) >= rho * (1.0 - 1e-12);
}

}  // namespace siirv
