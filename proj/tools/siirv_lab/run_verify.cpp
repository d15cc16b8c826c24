#include <functional>

#include "report.hpp"

namespace lab {

using namespace siirv;

namespace {

std::vector<ParamVector> region_grid(const ExpFamilySpec& f, int per_axis) {
    const Vec& lo = f.base_region.box_lo();
    const Vec& hi = f.base_region.box_hi();
    const std::size_t k = lo.size();
    std::vector<ParamVector> out;
    std::vector<int> idx(k, 0);
    while (true) {
        ParamVector a(k);
        for (std::size_t i = 0; i < k; ++i) a[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
        if (f.base_region.contains(a, 1e-9)) out.push_back(a);
        std::size_t d = 0;
        while (d < k && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == k) break;
    }
    return out;
}

}  // namespace

Status run_verify(const Scenario& s, const std::string& out) {
    Csv csv({"check", "instance", "bound", "oracle", "slack", "result"});
    bool ok = true;
    Json assumptions = nullptr;

    std::function<PMFTable(Rng&)> term;
    if (s.family) {
        const ExpFamilySpec& f = *s.family;
        const auto grid = region_grid(f, s.grid);
        const AssumptionReport rep = verify_assumptions(f, grid, mode_scan_window(f, s.constants), s.constants);
        assumptions = io::to_json(rep);
        for (const auto& e : rep.entries) {
            csv.row({e.condition, e.witness.empty() ? "-" : e.witness, "", "", "", e.passed ? "pass" : "fail"});
            ok = ok && e.passed;
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const PartitionCheck pc = partition_bound_check(f, grid[i], s.constants);
            csv.row({"partition_bound", std::to_string(i), fmt(pc.bound), fmt(pc.value), "0", pc.holds ? "pass" : "fail"});
            ok = ok && pc.holds;
        }
        term = [f, k = s.constants](Rng& rng) { return pmf_member_unchecked(f, f.base_region.sample(rng), 1e-14, k); };
    } else {
        term = [](Rng& rng) { return geometric_pmf(rng.uniform(0.2, 0.95), 1e-14); };
    }

    auto record = [&](const char* name, int i, const BoundCheck& c) {
        csv.row({name, std::to_string(i), fmt(c.bound), fmt(c.oracle), fmt(c.slack), c.holds ? "pass" : "fail"});
        ok = ok && c.holds;
    };
    const Rng root(s.seed);
    for (int i = 0; i < s.validators; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        const GaussParams g1{rng.uniform(-5.0, 5.0), rng.uniform(0.5, 50.0)};
        const GaussParams g2{g1.mu + rng.uniform(-1.0, 1.0), g1.sigma2 * rng.uniform(1.0, 1.5)};
        record("tv_gauss", i, check_tv_gauss(g1, g2));
        const double l1 = rng.uniform(0.5, 20.0);
        record("tv_poisson", i, check_tv_poisson(l1, std::max(0.05, l1 + rng.uniform(-0.5, 0.5))));
        std::vector<PMFTable> terms;
        const auto count = rng.uniform_int(1, 40);
        for (std::int64_t t = 0; t < count; ++t) terms.push_back(term(rng));
        record("shift_distance", i, check_shift_distance(terms));
        record("berry_esseen", i, check_berry_esseen(terms));
        std::vector<double> probs;
        const auto m = rng.uniform_int(1, 10);
        for (std::int64_t t = 0; t < m; ++t) probs.push_back(rng.uniform(0.5, 0.99));
        record("poisson_approx", i, check_poisson_approx(probs));
    }
    write_outputs(s, out, csv, {{"all_passed", ok}, {"assumptions", assumptions}, {"rows", csv.size()}});
    return ok ? kOk : kVerify;
}

}  // namespace lab
