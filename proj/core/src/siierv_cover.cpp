#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "siirv/bound.hpp"
#include "siirv/covers.hpp"
#include "siirv/error.hpp"

namespace siirv {

namespace {

constexpr double kOrderCap = 4611686018427387904.0;  // 2^62

std::uint64_t saturating_ceil(double v) {
    if (!(v < kOrderCap)) return static_cast<std::uint64_t>(kOrderCap);
    return static_cast<std::uint64_t>(std::ceil(std::max(v, 1.0)));
}

}  // namespace

CriticalOrder critical_order(const ExpFamilySpec& spec, double eps, const Constants& k) {
    if (!(eps > 0.0)) throw InvalidInput("critical order: eps must be positive");
    CriticalOrder c;
    const double e2 = eps * eps, g = spec.gamma, b = spec.B;
    c.n1 = k.c_n[0] * b * b / (e2 * std::pow(g, 3));
    c.n2 = k.c_n[1] * std::pow(b, 7) / (e2 * std::pow(g, 7));
    c.n3 = k.c_n[2] * std::pow(b, 7.5) / (e2 * std::pow(g, 8));
    c.n4 = k.c_n[3] * (spec.L * spec.L + std::sqrt(b)) / (e2 * g * g);
    c.n_crit = saturating_ceil(std::max({c.n1, c.n2, c.n3, c.n4}));
    return c;
}

LatticeNet LatticeNet::over_box(const Box& box, double radius) {
    if (!(radius > 0.0)) throw InvalidInput("lattice net: radius must be positive");
    LatticeNet net;
    net.lo = box.lo;
    net.hi = box.hi;
    net.radius = radius;
    net.pitch = 2.0 * radius / std::sqrt(static_cast<double>(box.lo.size()));
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
        const double cells = std::ceil((box.hi[i] - box.lo[i]) / net.pitch);
        if (cells > 1e15) throw GridOverflow("lattice net: too many points per axis");
        net.counts.push_back(static_cast<std::int64_t>(cells) + 1);
    }
    return net;
}

std::uint64_t LatticeNet::size() const {
    double s = 1.0;
    for (auto c : counts) s *= static_cast<double>(c);
    return s >= kOrderCap ? static_cast<std::uint64_t>(kOrderCap) : static_cast<std::uint64_t>(s);
}

ParamVector LatticeNet::point(const std::vector<std::int64_t>& idx) const {
    ParamVector p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
        p[i] = std::clamp(lo[i] + static_cast<double>(idx[i]) * pitch, lo[i], hi[i]);
    return p;
}

std::vector<std::int64_t> LatticeNet::nearest_index(const Vec& a) const {
    std::vector<std::int64_t> idx(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const auto j = static_cast<std::int64_t>(std::llround((a[i] - lo[i]) / pitch));
        idx[i] = std::clamp<std::int64_t>(j, 0, counts[i] - 1);
    }
    return idx;
}

std::vector<ParamVector> LatticeNet::neighbourhood(const Vec& a, int reach) const {
    const auto c = nearest_index(a);
    const std::size_t k = c.size();
    std::vector<ParamVector> out;
    std::vector<std::int64_t> off(k, -reach);
    while (true) {
        std::vector<std::int64_t> idx(k);
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = c[i] + off[i];
            if (idx[i] < 0 || idx[i] >= counts[i]) ok = false;
        }
        if (ok) out.push_back(point(idx));
        std::size_t d = 0;
        while (d < k && ++off[d] > reach) off[d++] = -reach;
        if (d == k) break;
    }
    return out;
}

double CoverSet::sparse_candidate_count() const {
    // multisets of size 1..N from P points: C(P + N, N) - 1
    const double p = static_cast<double>(sparse.points.size());
    const double nn = static_cast<double>(sparse_order);
    const double lg = std::lgamma(p + nn + 1.0) - std::lgamma(p + 1.0) - std::lgamma(nn + 1.0);
    if (lg > 700.0) return std::numeric_limits<double>::infinity();
    return std::round(std::exp(lg)) - 1.0;
}

CoverSet cover_siierv(const ExpFamilySpec& spec, std::uint64_t n, double eps, const Constants& k) {
    if (n == 0) throw InvalidInput("cover: order must be positive");
    if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("cover: eps must lie in (0, 1)");
    spec.validate();
    CoverSet c;
    c.eps = eps;
    c.n = n;
    c.crit = critical_order(spec, eps, k);
    c.sparse_order = std::min(n, c.crit.n_crit);
    c.sparse = sparsify_family(spec, eps / static_cast<double>(c.sparse_order), k);
    c.dense_enabled = n > c.crit.n_crit;
    if (c.dense_enabled) {
        const double sb = std::sqrt(spec.B);
        c.m_max = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * sb / spec.gamma));
        c.m_min = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(static_cast<double>(c.crit.n_crit) * spec.gamma / sb)));
        const double radius = (eps / static_cast<double>(c.m_max)) * std::sqrt(2.0 / spec.Lambda);
        Box box{spec.base_region.box_lo(), spec.base_region.box_hi()};
        c.dense = LatticeNet::over_box(box, radius);
    }
    return c;
}

namespace {

class TableCache {
public:
    TableCache(const ExpFamilySpec& spec, const Constants& k) : spec_(spec), k_(k) {}
    const PMFTable& get(const ParamVector& a) {
        auto it = cache_.find(a);
        if (it == cache_.end()) it = cache_.emplace(a, pmf_member(spec_, a, 1e-14, k_)).first;
        return it->second;
    }

private:
    const ExpFamilySpec& spec_;
    const Constants& k_;
    std::map<ParamVector, PMFTable> cache_;
};

void consider(NearestResult& best, const TvResult& tv, const char* regime, std::vector<ParamVector> params,
              bool heuristic) {
    if (tv.value < best.tv.value || best.params.empty()) {
        best.tv = tv;
        best.regime = regime;
        best.params = std::move(params);
        best.heuristic = heuristic;
    }
}

struct IidCandidate {
    double proxy;
    ParamVector b;
    std::int64_t m;
};

// Scores i.i.d. sums b^{*m} by the rounded-normal proxy and evaluates the best few exactly.
void search_iid(NearestResult& best, const PMFTable& x, const std::vector<ParamVector>& pts, std::int64_t m_lo,
                std::int64_t m_hi, std::size_t evaluations, const char* regime, TableCache& cache) {
    const Moments mx = moments(x);
    if (!(mx.variance > 0.0)) return;
    std::vector<IidCandidate> cands;
    for (const auto& b : pts) {
        const Moments mb = moments(cache.get(b));
        if (!(mb.variance > 0.0)) continue;
        const auto m0 = static_cast<std::int64_t>(std::ceil(mx.variance / mb.variance));
        for (std::int64_t m = m0 - 1; m <= m0 + 1; ++m) {
            if (m < m_lo || m > m_hi) continue;
            const double md = static_cast<double>(m);
            cands.push_back({tv_gauss_bound({mx.mean, mx.variance}, {md * mb.mean, md * mb.variance}), b, m});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const IidCandidate& a, const IidCandidate& b) { return a.proxy < b.proxy; });
    for (std::size_t i = 0; i < cands.size() && i < evaluations; ++i) {
        const PMFTable y = convolve_power(cache.get(cands[i].b), cands[i].m);
        ++best.evaluated;
        consider(best, tv_distance(x, y), regime, std::vector<ParamVector>(static_cast<std::size_t>(cands[i].m), cands[i].b),
                 true);
    }
}

void exhaustive_sparse(NearestResult& best, const PMFTable& x, const CoverSet& cover, TableCache& cache) {
    const auto& pts = cover.sparse.points;
    std::vector<std::size_t> chosen;
    auto dfs = [&](auto&& self, std::size_t start, const PMFTable& acc) -> void {
        for (std::size_t j = start; j < pts.size(); ++j) {
            const PMFTable next = convolve(acc, cache.get(pts[j]));
            chosen.push_back(j);
            ++best.evaluated;
            const TvResult tv = tv_distance(x, next);
            if (tv.value < best.tv.value || best.params.empty()) {
                std::vector<ParamVector> ps;
                for (auto c : chosen) ps.push_back(pts[c]);
                consider(best, tv, "sparse", std::move(ps), false);
            }
            if (chosen.size() < cover.sparse_order) self(self, j, next);
            chosen.pop_back();
        }
    };
    dfs(dfs, 0, PMFTable::point_mass(0));
}

}  // namespace

NearestResult nearest_in_cover(const PMFTable& x, const CoverSet& cover, const ExpFamilySpec& spec,
                               const NearestOptions& opt, const Constants& k) {
    NearestResult best;
    TableCache cache(spec, k);
    const double count = cover.sparse_candidate_count();

    if (count <= static_cast<double>(opt.budget)) {
        exhaustive_sparse(best, x, cover, cache);
    } else if (opt.terms_hint && opt.terms_hint->size() <= cover.sparse_order) {
        // per-term assignment: pull each term inside the critical ball, then
        // take the closest of its nearest cover points in TV
        std::vector<ParamVector> chosen;
        std::vector<PMFTable> tables;
        for (const auto& a : *opt.terms_hint) {
            const auto bp = bound_parameter(spec, a, cover.sparse.radius_tv, k);
            const PMFTable& target = cache.get(a);
            double best_tv = 2.0;
            ParamVector pick;
            for (auto id : cover.sparse.nearest(bp.b, 4)) {
                const auto& pt = cover.sparse.points[id];
                const double tv = tv_distance(target, cache.get(pt)).value;
                if (tv < best_tv) {
                    best_tv = tv;
                    pick = pt;
                }
            }
            if (pick.empty()) break;
            chosen.push_back(pick);
            tables.push_back(cache.get(pick));
        }
        if (chosen.size() == opt.terms_hint->size()) {
            ++best.evaluated;
            const PMFTable y = tables.empty() ? PMFTable::point_mass(0) : convolve_all(tables);
            consider(best, tv_distance(x, y), "sparse", chosen, true);
        }
    } else if (cover.sparse.points.size() <= opt.budget) {
        search_iid(best, x, cover.sparse.points, 1, static_cast<std::int64_t>(cover.sparse_order), opt.dense_evaluations,
                   "sparse", cache);
    }

    if (cover.dense_enabled) {
        std::vector<ParamVector> pts;
        const Moments mx = moments(x);
        try {
            const MomentMatch mm = moment_match(mx.mean, mx.variance, spec, spec.base_region.path(), k);
            pts = cover.dense.neighbourhood(mm.b, opt.dense_reach);
        } catch (const BracketFailure&) {
            if (cover.dense.size() <= opt.budget) {
                std::vector<std::int64_t> idx(cover.dense.counts.size(), 0);
                while (true) {
                    pts.push_back(cover.dense.point(idx));
                    std::size_t d = 0;
                    while (d < idx.size() && ++idx[d] == cover.dense.counts[d]) idx[d++] = 0;
                    if (d == idx.size()) break;
                }
            }
        }
        std::erase_if(pts, [&](const ParamVector& b) { return !spec.in_rho_cone(b); });
        search_iid(best, x, pts, cover.m_min, cover.m_max, opt.dense_evaluations, "dense", cache);
    }
    return best;
}

}  // namespace siirv
