#include <algorithm>
#include <cmath>
#include <limits>

#include "siirv/bound.hpp"
#include "siirv/covers.hpp"
#include "siirv/error.hpp"

namespace siirv {

PointIndex::PointIndex(std::size_t dim, double cell)
    : dim_(dim),
      cell_(cell),
      lo_cell_(dim, std::numeric_limits<std::int64_t>::max()),
      hi_cell_(dim, std::numeric_limits<std::int64_t>::min()) {}

std::vector<std::int64_t> PointIndex::cell_of(const Vec& p) const {
    std::vector<std::int64_t> c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
    return c;
}

std::uint64_t PointIndex::key(const std::vector<std::int64_t>& c) const {
    std::uint64_t h = 0x51ed270b27abcdefULL;
    for (auto v : c) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return h;
}

void PointIndex::insert(const Vec& p, std::uint32_t id) {
    const auto c = cell_of(p);
    for (std::size_t i = 0; i < dim_; ++i) {
        lo_cell_[i] = std::min(lo_cell_[i], c[i]);
        hi_cell_[i] = std::max(hi_cell_[i], c[i]);
    }
    buckets_[key(c)].push_back(id);
}

bool PointIndex::any_within(const Vec& p, double radius, const std::vector<Vec>& points) const {
    const auto c = cell_of(p);
    std::vector<std::int64_t> off(dim_, -1);
    while (true) {
        std::vector<std::int64_t> cc(dim_);
        for (std::size_t i = 0; i < dim_; ++i) cc[i] = c[i] + off[i];
        if (auto it = buckets_.find(key(cc)); it != buckets_.end())
            for (auto id : it->second)
                if (distance(points[id], p) <= radius) return true;
        std::size_t d = 0;
        while (d < dim_ && ++off[d] == 2) off[d++] = -1;
        if (d == dim_) break;
    }
    return false;
}

std::vector<std::uint32_t> PointIndex::nearest(const Vec& p, std::size_t count, const std::vector<Vec>& points) const {
    std::vector<std::pair<double, std::uint32_t>> found;
    if (buckets_.empty() || count == 0) return {};
    const auto c = cell_of(p);
    std::int64_t r_max = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        r_max = std::max({r_max, std::abs(c[i] - lo_cell_[i]), std::abs(hi_cell_[i] - c[i])});
    for (std::int64_t r = 0; r <= r_max; ++r) {
        // visit the shell of cells at Chebyshev distance r
        std::vector<std::int64_t> off(dim_, -r);
        while (true) {
            std::int64_t m = 0;
            for (auto o : off) m = std::max(m, std::abs(o));
            if (m == r) {
                std::vector<std::int64_t> cc(dim_);
                for (std::size_t i = 0; i < dim_; ++i) cc[i] = c[i] + off[i];
                if (auto it = buckets_.find(key(cc)); it != buckets_.end())
                    for (auto id : it->second) found.emplace_back(distance(points[id], p), id);
            }
            std::size_t d = 0;
            while (d < dim_ && ++off[d] > r) off[d++] = -r;
            if (d == dim_) break;
        }
        if (found.size() >= count) {
            std::sort(found.begin(), found.end());
            // hash collisions can add duplicates from far cells; drop them
            found.erase(std::unique(found.begin(), found.end()), found.end());
            if (found.size() >= count && found[count - 1].first <= static_cast<double>(r) * cell_) break;
        }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < found.size() && out.size() < count; ++i) out.push_back(found[i].second);
    return out;
}

std::vector<Vec> euclid_cover(const CoverRegion& region, double eps, std::uint64_t grid_cap) {
    if (!(eps > 0.0)) throw InvalidInput("euclid_cover: eps must be positive");
    const std::size_t k = region.lo.size();
    const double pitch = eps / (2.0 * std::sqrt(static_cast<double>(k)));
    std::vector<std::int64_t> n(k);
    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double span = std::max(0.0, region.hi[i] - region.lo[i]);
        const double cells = std::floor(span / pitch + 1e-9) + 1.0;
        total *= cells;
        if (total > 50.0 * static_cast<double>(grid_cap))
            throw GridOverflow("euclid_cover: enclosing grid is too large");
        n[i] = static_cast<std::int64_t>(cells);
    }
    std::vector<Vec> out;
    PointIndex index(k, eps);
    std::uint64_t candidates = 0;
    std::vector<std::int64_t> idx(k, 0);
    Vec p(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) p[i] = region.lo[i] + static_cast<double>(idx[i]) * pitch;
        if (region.contains(p)) {
            if (++candidates > grid_cap) throw GridOverflow("euclid_cover: more than grid_cap candidates");
            if (!index.any_within(p, eps, out)) {
                index.insert(p, static_cast<std::uint32_t>(out.size()));
                out.push_back(p);
            }
        }
        std::size_t d = k;
        while (d > 0) {
            --d;
            if (++idx[d] < n[d]) break;
            idx[d] = 0;
            if (d == 0) return out;
        }
        if (k == 0) return out;
    }
}

void ParamCover::build_index() {
    const std::size_t k = points.empty() ? 0 : points.front().size();
    index = PointIndex(k, std::max(radius_euclid, 1e-12));
    for (std::size_t i = 0; i < points.size(); ++i) index.insert(points[i], static_cast<std::uint32_t>(i));
}

std::vector<std::uint32_t> ParamCover::nearest(const ParamVector& a, std::size_t count) const {
    return index.nearest(a, count, points);
}

ParamCover sparsify_family(const ExpFamilySpec& spec, double eps, const Constants& k) {
    spec.validate();
    ParamCover cover;
    cover.r_crit = critical_radius(spec, eps, k);
    cover.radius_tv = eps;
    cover.radius_euclid = eps * std::sqrt(2.0 / spec.Lambda);
    const double r = cover.r_crit;
    const std::size_t dim = spec.dim();

    CoverRegion region;
    region.lo.assign(dim, 0.0);
    region.hi.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (const auto& z : spec.cone.Z) {
            if (z[i] < 0.0) region.lo[i] = -r;
            if (z[i] > 0.0) region.hi[i] = r;
        }
        region.lo[i] = std::min(region.lo[i], spec.base_region.box_lo()[i]);
        region.hi[i] = std::max(region.hi[i], std::min(r, spec.base_region.box_hi()[i]));
    }
    region.contains = [&spec, r](const Vec& a) { return norm(a) <= r * (1.0 + 1e-12) && spec.in_rho_cone(a); };
    cover.points = euclid_cover(region, cover.radius_euclid, k.grid_cap);
    cover.build_index();
    return cover;
}

double sparse_size_bound(const ExpFamilySpec& spec, double eps, const Constants& k) {
    const double r = critical_radius(spec, eps, k);
    return std::pow(1.0 + 2.0 * r * std::sqrt(spec.Lambda / 2.0) / eps, static_cast<double>(spec.dim()));
}

}  // namespace siirv
