#include "report.hpp"
#include "siirv/error.hpp"

namespace lab {

using namespace siirv;

Status run_learn(const Scenario& s, const std::string& out) {
    if (s.target == Target::Pnbd) throw ConfigError("learn scenarios take a family or siiurv target");
    const ExpFamilySpec& f = *s.family;
    const bool unimodal = s.learner == "siiurv";
    if (!unimodal && s.learner != "siierv") throw ConfigError("learner must be siierv or siiurv");
    SiiurvParams up = s.siiurv;
    if (s.target != Target::Siiurv) up = {std::max(1.0, 2.0 * f.L), f.B, f.gamma, -static_cast<std::int64_t>(std::ceil(f.L))};

    Csv csv({"eps", "run", "learner", "branch", "tv", "within_eps", "proper", "order", "samples", "estimate_samples",
             "sparse_samples", "final_samples"});
    Json runs = Json::array(), summary = Json::array();
    for (std::size_t e = 0; e < s.eps.size(); ++e) {
        const double eps = s.eps[e];
        std::size_t within = 0;
        for (std::size_t r = 0; r < s.instances; ++r) {
            Rng rng = Rng(s.seed).split(e * 1000003 + r);
            SIIRVSpec target;
            const ParamVector first = f.base_region.sample(rng);
            for (std::uint64_t i = 0; i < s.n; ++i) target.terms.emplace_back(s.iid ? first : f.base_region.sample(rng));
            const PMFTable truth = sum_pmf(target, &f, 1e-13, s.constants);
            SampleOracle x = SampleOracle::from_table(truth, s.learn.sample_budget_cap);
            LearnConfig cfg = s.learn;
            cfg.eps = eps;
            cfg.seed = splitmix64(s.seed + 0x9e3779b97f4a7c15ull * (e * 1000003 + r + 1));

            Json run{{"eps", eps}, {"run", r}, {"seed", cfg.seed}};
            PMFTable hyp;
            std::string branch;
            bool proper = true;
            std::uint64_t order = 0, est = 0, sparse = 0, fin = 0, used = 0;
            if (unimodal) {
                const SiiurvLearnResult res = learn_siiurv(x, s.n, up, cfg);
                hyp = res.hypothesis;
                branch = res.branch;
                est = res.estimate.samples;
                used = res.samples_used;
                run["estimate"] = io::to_json(res.estimate);
                run["final"] = io::to_json(res.final_pair);
            } else {
                const SiiervLearnResult res = learn_siierv(x, f, s.n, cfg);
                hyp = sum_pmf(res.output, &f, 1e-13, s.constants);
                branch = res.branch;
                order = res.output.terms.size();
                proper = order <= res.order_cap;
                for (const auto& t : res.output.terms) proper = proper && f.in_rho_cone(std::get<ParamVector>(t));
                est = res.x_samples_estimate;
                sparse = res.x_samples_sparse;
                fin = res.x_samples_final;
                used = res.samples_used;
                run["estimate"] = io::to_json(res.estimate);
                run["output"] = io::to_json(res.output);
                run["sparse_report"] = io::to_json(res.sparse_report);
                run["dense_report"] = io::to_json(res.dense_report);
                run["final"] = io::to_json(res.final_pair);
                run["order_cap"] = res.order_cap;
            }
            const double tv = tv_distance(hyp, truth).value;
            within += tv <= eps;
            run["tv"] = tv;
            run["branch"] = branch;
            run["samples"] = used;
            runs.push_back(run);
            csv.row({fmt(eps), std::to_string(r), s.learner, branch, fmt(tv), tv <= eps ? "1" : "0", proper ? "1" : "0",
                     std::to_string(order), std::to_string(used), std::to_string(est), std::to_string(sparse),
                     std::to_string(fin)});
        }
        summary.push_back({{"eps", eps}, {"runs", s.instances}, {"within_eps", within}});
    }
    write_outputs(s, out, csv, {{"summary", summary}, {"runs", runs}});
    return kOk;
}

}  // namespace lab
