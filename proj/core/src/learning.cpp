#include "siirv/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "siirv/error.hpp"

namespace siirv {

SampleOracle::SampleOracle(Draw draw, std::uint64_t cap) : draw_(std::move(draw)), cap_(cap) {
    if (cap_ == 0) throw InvalidInput("sample oracle: cap must be positive");
}

SampleOracle SampleOracle::from_table(const PMFTable& p, std::uint64_t cap) {
    auto sampler = std::make_shared<TableSampler>(p);
    return SampleOracle([sampler](Rng& rng) { return (*sampler)(rng); }, cap);
}

std::int64_t SampleOracle::draw(Rng& rng) {
    if (used_ >= cap_) throw BudgetExceeded("sample budget exhausted");
    ++used_;
    return draw_(rng);
}

std::vector<std::int64_t> SampleOracle::draw(Rng& rng, std::uint64_t count) {
    if (count > cap_ - used_) throw BudgetExceeded("sample budget exhausted");
    std::vector<std::int64_t> xs(count);
    for (auto& v : xs) v = draw_(rng);
    used_ += count;
    return xs;
}

void LearnConfig::validate() const {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
    if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (!(beta >= 0.0) || (1.0 + beta) * (1.0 + beta) > 1.0 + eps / 8.0)
        throw ConfigError("beta must satisfy (1 + beta)^2 <= 1 + eps / 8");
    if (sample_budget_cap == 0) throw ConfigError("sample budget cap must be positive");
    if (prescreen_keep == 0) throw ConfigError("prescreen_keep must be positive");
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

PMFTable gauss_or_point(const MeanVar& e) {
    if (e.sigma2 > 0.0) return disc_gauss_pmf({e.mu, e.sigma2});
    return PMFTable::point_mass(std::llround(e.mu));
}

// Indices of the `keep` smallest scores, ties broken by index.
std::vector<std::size_t> smallest(const std::vector<double>& scores, std::size_t keep) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    if (idx.size() > keep) idx.resize(keep);
    return idx;
}

struct Window {
    std::int64_t lo;
    std::vector<char> in_w1;
    double p1 = 0.0, p2 = 0.0;
    bool empty = true;

    Window(const PMFTable& h1, const PMFTable& h2) : lo(std::min(h1.lo, h2.lo)) {
        const std::int64_t hi = std::max(h1.hi(), h2.hi());
        in_w1.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (std::int64_t x = lo; x <= hi; ++x) {
            const double a = h1.at(x), b = h2.at(x);
            if (a > b) {
                in_w1[static_cast<std::size_t>(x - lo)] = 1;
                p1 += a;
                p2 += b;
                empty = false;
            }
        }
    }
    bool contains(std::int64_t x) const {
        return x >= lo && x - lo < static_cast<std::int64_t>(in_w1.size()) && in_w1[static_cast<std::size_t>(x - lo)];
    }
};

PairRecord decide(const Window& w, const std::vector<std::int64_t>& xs, double eps) {
    PairRecord r;
    r.p1 = w.p1;
    r.p2 = w.p2;
    if (w.empty) return r;  // identical hypotheses
    std::uint64_t hits = 0;
    for (auto v : xs) hits += w.contains(v);
    r.samples = xs.size();
    r.tau = xs.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(xs.size());
    if (r.tau > r.p1 - eps)
        r.decision = Decision::H1;
    else if (r.tau < r.p2 + eps)
        r.decision = Decision::H2;
    else
        r.decision = Decision::Draw;
    return r;
}

}  // namespace

MeanVar estimate_mean_var(SampleOracle& x, double eps, double delta, Rng& rng) {
    if (!(eps > 0.0) || !(delta > 0.0) || !(delta < 1.0)) throw InvalidInput("estimate_mean_var: bad eps or delta");
    const auto per = static_cast<std::uint64_t>(std::ceil(3.0 / (eps * eps)));
    const auto rounds = static_cast<std::size_t>(std::ceil(18.0 * std::log(2.0 / delta)));
    std::vector<double> means, vars;
    const std::uint64_t before = x.used();
    for (std::size_t r = 0; r < rounds; ++r) {
        const auto xs = x.draw(rng, per);
        double mean = 0.0;
        for (auto v : xs) mean += static_cast<double>(v);
        mean /= static_cast<double>(per);
        double ss = 0.0;
        for (auto v : xs) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
        means.push_back(mean);
        vars.push_back(per > 1 ? ss / static_cast<double>(per - 1) : 0.0);
    }
    return {median(means), median(vars), x.used() - before};
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::H1: return "H1";
        case Decision::H2: return "H2";
        default: return "draw";
    }
}

std::uint64_t selection_samples(double eps, double delta, const Constants& k) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(k.c_h * std::log(1.0 / delta) / (eps * eps))));
}

PairRecord select_on_samples(const std::vector<std::int64_t>& xs, const PMFTable& h1, const PMFTable& h2, double eps) {
    return decide(Window(h1, h2), xs, eps);
}

PairRecord select_hypothesis(SampleOracle& x, const PMFTable& h1, const PMFTable& h2, double eps, double delta,
                             Rng& rng, const Constants& k) {
    const Window w(h1, h2);
    if (w.empty) return decide(w, {}, eps);
    return decide(w, x.draw(rng, selection_samples(eps, delta, k)), eps);
}

HypothesisReport tournament(SampleOracle& x, const std::vector<PMFTable>& hyps, double eps, double delta, Rng& rng,
                            bool reuse_samples, const Constants& k) {
    if (hyps.empty()) throw InvalidInput("tournament: no hypotheses");
    HypothesisReport rep;
    const std::size_t m = hyps.size();
    rep.losses.assign(m, 0);
    const std::uint64_t before = x.used();
    if (m > 1) {
        const double d = delta / static_cast<double>(m * m);
        std::vector<std::int64_t> pool;
        if (reuse_samples) pool = x.draw(rng, selection_samples(eps, d, k));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                PairRecord r = reuse_samples ? select_on_samples(pool, hyps[i], hyps[j], eps)
                                             : select_hypothesis(x, hyps[i], hyps[j], eps, d, rng, k);
                r.first = i;
                r.second = j;
                if (r.decision == Decision::H1) ++rep.losses[j];
                if (r.decision == Decision::H2) ++rep.losses[i];
                rep.pairs.push_back(r);
            }
        }
    }
    const auto it = std::min_element(rep.losses.begin(), rep.losses.end());
    rep.winner = static_cast<std::size_t>(it - rep.losses.begin());
    rep.never_lost = *it == 0;
    rep.samples_used = x.used() - before;
    return rep;
}

SiiurvLearnResult learn_siiurv(SampleOracle& x, std::uint64_t n, const SiiurvParams& p, const LearnConfig& cfg) {
    cfg.validate();
    const Constants& k = cfg.constants;
    const Rng root(cfg.seed);
    Rng r_sparse = root.split(1), r_est = root.split(2), r_final = root.split(3);
    const double d3 = cfg.delta / 3.0;
    const std::uint64_t before = x.used();

    SiiurvLearnResult res;
    const SiiurvCover cover = cover_siiurv(n, p, cfg.eps, k);
    PMFTable h_sparse;
    if (cover.sparse) {
        const auto count = static_cast<std::uint64_t>(cover.s_hi - cover.s_lo + 1);
        if (count > k.materialize_cap) throw GridOverflow("learn_siiurv: too many mode sums");
        // pilot draws size the empirical used to locate cover elements: 2K/eps^2 draws for K distinct values
        auto xs = x.draw(r_sparse, selection_samples(cfg.eps, d3, k));
        std::vector<std::int64_t> distinct = xs;
        std::sort(distinct.begin(), distinct.end());
        const auto kinds = static_cast<double>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
        const auto want = static_cast<std::uint64_t>(std::ceil(2.0 * kinds / (cfg.eps * cfg.eps)));
        if (want > xs.size()) {
            const auto more = x.draw(r_sparse, want - xs.size());
            xs.insert(xs.end(), more.begin(), more.end());
        }
        const PMFTable emp = empirical(xs);
        std::vector<PMFTable> cands;
        std::vector<double> score;
        for (std::int64_t S = cover.s_lo; S <= cover.s_hi; ++S) {
            cands.push_back(cover.locate(emp, S));
            score.push_back(tv_distance(emp, cands.back()).value);
        }
        std::vector<PMFTable> kept;
        for (auto i : smallest(score, cfg.prescreen_keep)) kept.push_back(cands[i]);
        res.sparse_report = tournament(x, kept, cfg.eps, d3, r_sparse, cfg.reuse_samples, k);
        h_sparse = kept[res.sparse_report.winner];
        res.sparse_ran = true;
    }

    res.estimate = estimate_mean_var(x, cfg.eps, d3, r_est);
    const PMFTable h_dense = gauss_or_point(res.estimate);
    if (res.sparse_ran) {
        res.final_pair = select_hypothesis(x, h_sparse, h_dense, cfg.eps, d3, r_final, k);
        const bool dense = res.final_pair.decision == Decision::H2;
        res.hypothesis = dense ? h_dense : h_sparse;
        res.branch = dense ? "dense" : "sparse";
    } else {
        res.hypothesis = h_dense;
        res.branch = "dense";
    }
    res.samples_used = x.used() - before;
    return res;
}

namespace {

struct Candidate {
    std::vector<ParamVector> params;
    PMFTable table;
};

Candidate iid_candidate(const ExpFamilySpec& spec, const ParamVector& b, std::int64_t m, const Constants& k) {
    return {std::vector<ParamVector>(static_cast<std::size_t>(m), b), convolve_power(pmf_member(spec, b, 1e-14, k), m)};
}

// i.i.d. sums b^{*m} with m near the matched count, ranked by the rounded-normal proxy.
std::vector<Candidate> iid_candidates(const ExpFamilySpec& spec, const std::vector<ParamVector>& pts, const MeanVar& e,
                                      std::int64_t m_lo, std::int64_t m_hi, std::size_t keep, const Constants& k) {
    struct Scored {
        std::size_t point;
        std::int64_t m;
    };
    std::vector<Scored> all;
    std::vector<double> score;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Moments mb = moments(pmf_member(spec, pts[i], 1e-14, k));
        if (!(mb.variance > 0.0)) continue;
        const auto m0 = static_cast<std::int64_t>(std::ceil(e.sigma2 / mb.variance));
        for (std::int64_t m = m0 - 1; m <= m0 + 1; ++m) {
            if (m < m_lo || m > m_hi) continue;
            const double md = static_cast<double>(m);
            const GaussParams g{md * mb.mean, md * mb.variance};
            all.push_back({i, m});
            score.push_back(e.sigma2 > 0.0 ? tv_gauss_bound({e.mu, e.sigma2}, g) : std::abs(e.mu - g.mu) + g.sigma2);
        }
    }
    std::vector<Candidate> out;
    for (auto i : smallest(score, keep)) out.push_back(iid_candidate(spec, pts[all[i].point], all[i].m, k));
    return out;
}

std::vector<Candidate> all_multisets(const ExpFamilySpec& spec, const std::vector<ParamVector>& pts, std::uint64_t order,
                                     const Constants& k) {
    std::vector<PMFTable> base;
    for (const auto& b : pts) base.push_back(pmf_member(spec, b, 1e-14, k));
    std::vector<Candidate> out;
    std::vector<std::size_t> chosen;
    auto dfs = [&](auto&& self, std::size_t start, const PMFTable& acc) -> void {
        for (std::size_t j = start; j < pts.size(); ++j) {
            PMFTable next = convolve(acc, base[j]);
            chosen.push_back(j);
            Candidate c;
            for (auto i : chosen) c.params.push_back(pts[i]);
            c.table = next;
            out.push_back(std::move(c));
            if (chosen.size() < order) self(self, j, next);
            chosen.pop_back();
        }
    };
    dfs(dfs, 0, PMFTable::point_mass(0));
    return out;
}

}  // namespace

SiiervLearnResult learn_siierv(SampleOracle& x, const ExpFamilySpec& spec, std::uint64_t n, const LearnConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (n == 0) throw InvalidInput("learn_siierv: order must be positive");
    const Constants& k = cfg.constants;
    const Rng root(cfg.seed);
    Rng r_est = root.split(1), r_sparse = root.split(2), r_dense = root.split(3), r_final = root.split(4);
    const double eps = cfg.eps, d3 = cfg.delta / 3.0;
    const std::size_t keep = cfg.prescreen_keep;
    const std::uint64_t before = x.used();

    SiiervLearnResult res;
    res.order_cap = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * std::sqrt(spec.B) / spec.gamma));
    res.estimate = estimate_mean_var(x, eps, d3, r_est);
    res.x_samples_estimate = res.estimate.samples;

    // sparse branch: multisets of single-term cover points, coarse screen on X samples
    const CriticalOrder crit = critical_order(spec, eps, k);
    const std::uint64_t order = std::min(n, crit.n_crit);
    const ParamCover pc = sparsify_family(spec, eps / static_cast<double>(order), k);
    CoverSet probe;
    probe.sparse = pc;
    probe.sparse_order = order;
    std::vector<Candidate> sparse;
    if (probe.sparse_candidate_count() <= static_cast<double>(k.candidate_budget))
        sparse = all_multisets(spec, pc.points, order, k);
    else
        sparse = iid_candidates(spec, pc.points, res.estimate, 1, static_cast<std::int64_t>(order), 4 * keep, k);
    const std::uint64_t sparse_before = x.used();
    Candidate h_sparse;
    if (!sparse.empty()) {
        if (sparse.size() > keep) {
            const PMFTable emp = empirical(x.draw(r_sparse, selection_samples(eps, d3, k)));
            std::vector<double> score;
            for (const auto& c : sparse) score.push_back(tv_distance(emp, c.table).value);
            std::vector<Candidate> kept;
            for (auto i : smallest(score, keep)) kept.push_back(std::move(sparse[i]));
            sparse = std::move(kept);
        }
        std::vector<PMFTable> tables;
        for (const auto& c : sparse) tables.push_back(c.table);
        res.sparse_report = tournament(x, tables, eps, d3, r_sparse, cfg.reuse_samples, k);
        h_sparse = sparse[res.sparse_report.winner];
    }
    res.x_samples_sparse = x.used() - sparse_before;

    // dense branch: moment-matched i.i.d. sums, refereed by draws from the estimated normal
    Candidate h_dense;
    bool dense_ok = false;
    if (res.estimate.sigma2 > 0.0) {
        try {
            const MomentMatch mm = moment_match(res.estimate.mu, res.estimate.sigma2, spec, spec.base_region.path(), k);
            const double radius = (eps / static_cast<double>(res.order_cap)) * std::sqrt(2.0 / spec.Lambda);
            const LatticeNet net =
                LatticeNet::over_box(Box{spec.base_region.box_lo(), spec.base_region.box_hi()}, radius);
            std::vector<ParamVector> pts = net.neighbourhood(mm.b, 1);
            std::erase_if(pts, [&](const ParamVector& b) { return !spec.in_rho_cone(b); });
            std::vector<Candidate> dense =
                iid_candidates(spec, pts, res.estimate, 1, static_cast<std::int64_t>(res.order_cap), 4 * keep, k);
            if (!dense.empty()) {
                const PMFTable g = gauss_or_point(res.estimate);
                if (dense.size() > keep) {
                    std::vector<double> score;
                    for (const auto& c : dense) score.push_back(tv_distance(g, c.table).value);
                    std::vector<Candidate> kept;
                    for (auto i : smallest(score, keep)) kept.push_back(std::move(dense[i]));
                    dense = std::move(kept);
                }
                SampleOracle z = SampleOracle::from_table(g, std::numeric_limits<std::uint64_t>::max());
                std::vector<PMFTable> tables;
                for (const auto& c : dense) tables.push_back(c.table);
                res.dense_report = tournament(z, tables, eps, d3, r_dense, cfg.reuse_samples, k);
                h_dense = dense[res.dense_report.winner];
                dense_ok = true;
            }
        } catch (const BracketFailure&) {
        }
    }

    const std::uint64_t final_before = x.used();
    const Candidate* pick = nullptr;
    if (!sparse.empty() && dense_ok) {
        res.final_pair = select_hypothesis(x, h_sparse.table, h_dense.table, eps, d3, r_final, k);
        const bool dense = res.final_pair.decision == Decision::H2;
        pick = dense ? &h_dense : &h_sparse;
        res.branch = dense ? "dense" : "sparse";
    } else if (dense_ok) {
        pick = &h_dense;
        res.branch = "dense";
    } else if (!sparse.empty()) {
        pick = &h_sparse;
        res.branch = "sparse";
    } else {
        throw AssumptionViolation("learn_siierv: no candidate in either branch");
    }
    res.x_samples_final = x.used() - final_before;
    for (const auto& b : pick->params) res.output.terms.emplace_back(b);
    res.output.order_bound = res.order_cap;
    res.hypothesis = pick->table;
    res.samples_used = x.used() - before;
    return res;
}

}  // namespace siirv
