#include "report.hpp"
#include "siirv/pnbd.hpp"

namespace lab {

namespace {

using namespace siirv;

std::vector<ParamVector> draw_params(const ExpFamilySpec& f, std::uint64_t n, bool iid, Rng& rng) {
    std::vector<ParamVector> ps;
    for (std::uint64_t i = 0; i < n; ++i) ps.push_back(iid && i > 0 ? ps.front() : f.base_region.sample(rng));
    return ps;
}

SIIRVSpec as_sum(const std::vector<ParamVector>& ps) {
    SIIRVSpec s;
    for (const auto& p : ps) s.terms.emplace_back(p);
    return s;
}

Json cover_family(const Scenario& s, Csv& csv) {
    const ExpFamilySpec& f = *s.family;
    Json covers = Json::array();
    for (std::size_t e = 0; e < s.eps.size(); ++e) {
        const double eps = s.eps[e];
        const CoverSet cover = cover_siierv(f, s.n, eps, s.constants);
        Json summary{{"eps", eps},
                     {"param_points", cover.sparse.points.size()},
                     {"sparse_order", cover.sparse_order},
                     {"n_crit", cover.crit.n_crit},
                     {"sparse_candidates", cover.sparse_candidate_count()},
                     {"dense_enabled", cover.dense_enabled},
                     {"dense_lattice_points", cover.dense_enabled ? cover.dense.size() : 0},
                     {"m_min", cover.m_min},
                     {"m_max", cover.m_max}};
        if (s.emit_cover) summary["cover"] = io::to_json(cover);
        covers.push_back(summary);
        for (std::size_t i = 0; i < s.instances; ++i) {
            Rng rng = Rng(s.seed).split(e * 1000003 + i);
            const auto ps = draw_params(f, s.n, s.iid, rng);
            const PMFTable x = sum_pmf(as_sum(ps), &f, 1e-13, s.constants);
            NearestOptions opt;
            opt.budget = s.constants.candidate_budget;
            opt.terms_hint = ps;
            const NearestResult r = nearest_in_cover(x, cover, f, opt, s.constants);
            const bool pass = r.tv.value <= eps + r.tv.slack + 1e-9;
            csv.row({fmt(eps), std::to_string(i), std::to_string(s.n), r.regime, fmt(r.tv.value), fmt(r.tv.slack),
                     r.heuristic ? "1" : "0", std::to_string(r.evaluated), std::to_string(cover.sparse.points.size()),
                     pass ? "pass" : "fail"});
        }
    }
    return covers;
}

Json cover_pnbd(const Scenario& s, Csv& csv) {
    Json covers = Json::array();
    for (std::size_t e = 0; e < s.eps.size(); ++e) {
        const double eps = s.eps[e];
        const PnbdCover pc = pnbd_cover(s.p_low, s.n, eps, s.constants);
        covers.push_back({{"eps", eps},
                          {"kappa", pc.kappa},
                          {"tv_overhead", pc.tv_overhead},
                          {"family", io::to_json(pc.family)},
                          {"param_points", pc.cover.sparse.points.size()},
                          {"n_crit", pc.cover.crit.n_crit},
                          {"dense_enabled", pc.cover.dense_enabled}});
        for (std::size_t i = 0; i < s.instances; ++i) {
            Rng rng = Rng(s.seed).split(e * 1000003 + i);
            std::vector<double> probs;
            std::vector<PMFTable> tables;
            for (std::uint64_t t = 0; t < s.n; ++t) {
                probs.push_back(s.iid && t > 0 ? probs.front() : rng.uniform(s.p_low, s.p_high));
                tables.push_back(geometric_pmf(probs.back(), 1e-14));
            }
            const PMFTable x = convolve_all(tables);
            NearestOptions opt;
            opt.budget = s.constants.candidate_budget;
            const NearestResult r = pnbd_nearest(pc, probs, opt, s.constants);
            std::vector<PMFTable> cand;
            for (const auto& b : r.params) cand.push_back(pmf_member(pc.family, b, 1e-14, s.constants));
            const TvResult full = tv_distance(x, convolve_all(cand));
            const bool pass = full.value <= eps + full.slack + 1e-9;
            csv.row({fmt(eps), std::to_string(i), std::to_string(s.n), r.regime, fmt(full.value), fmt(full.slack),
                     r.heuristic ? "1" : "0", std::to_string(r.evaluated),
                     std::to_string(pc.cover.sparse.points.size()), pass ? "pass" : "fail"});
        }
    }
    return covers;
}

Json cover_siiurv_targets(const Scenario& s, Csv& csv) {
    const ExpFamilySpec& f = *s.family;
    Json covers = Json::array();
    for (std::size_t e = 0; e < s.eps.size(); ++e) {
        const double eps = s.eps[e];
        for (std::size_t i = 0; i < s.instances; ++i) {
            Rng rng = Rng(s.seed).split(e * 1000003 + i);
            std::vector<PMFTable> terms;
            for (const auto& p : draw_params(f, s.n, s.iid, rng)) terms.push_back(pmf_member(f, p, 1e-13, s.constants));
            const PMFTable x = convolve_all(terms);
            const SiiurvCover c = cover_siiurv(terms, s.siiurv, eps, s.constants);
            if (i == 0) covers.push_back(io::to_json(c));
            TvResult tv;
            std::string regime;
            if (c.sparse) {
                tv = c.nearest(x).tv;
                regime = "sparse";
            } else {
                tv = tv_distance(x, disc_gauss_pmf(*c.dense));
                regime = "dense";
            }
            const bool pass = tv.value <= eps + tv.slack + 1e-9;
            csv.row({fmt(eps), std::to_string(i), std::to_string(s.n), regime, fmt(tv.value), fmt(tv.slack), "0",
                     "1", fmt(c.log_count()), pass ? "pass" : "fail"});
        }
    }
    return covers;
}

}  // namespace

Status run_cover(const Scenario& s, const std::string& out) {
    Csv csv({"eps", "instance", "n", "regime", "tv", "slack", "heuristic", "evaluated", "cover_size", "result"});
    Json covers;
    switch (s.target) {
        case Target::Pnbd: covers = cover_pnbd(s, csv); break;
        case Target::Siiurv: covers = cover_siiurv_targets(s, csv); break;
        default: covers = cover_family(s, csv); break;
    }
    write_outputs(s, out, csv, {{"covers", covers}, {"rows", csv.size()}});
    return kOk;
}

}  // namespace lab
