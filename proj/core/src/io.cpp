#include "siirv/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "siirv/catalog.hpp"
#include "siirv/error.hpp"

namespace siirv::io {

namespace {

template <class T>
T get(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    return j.contains(key) ? get<T>(j, key) : fallback;
}

Json vecs(const std::vector<Vec>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x);
    return a;
}

std::vector<Vec> vecs_from(const Json& j, const char* key) { return get<std::vector<Vec>>(j, key); }

std::string support_name(Support s) {
    switch (s) {
        case Support::Integers: return "integers";
        case Support::NonNegative: return "nonnegative";
        default: return "positive";
    }
}

Support support_from(const std::string& s) {
    if (s == "integers") return Support::Integers;
    if (s == "nonnegative") return Support::NonNegative;
    if (s == "positive") return Support::Positive;
    throw ConfigError("unknown support '" + s + "'");
}

}  // namespace

Json to_json(const PMFTable& p) { return {{"lo", p.lo}, {"probs", p.probs}, {"tail_bound", p.tail_bound}}; }

PMFTable table_from_json(const Json& j) {
    try {
        return PMFTable::make(get<std::int64_t>(j, "lo"), get<std::vector<double>>(j, "probs"),
                              get_or<double>(j, "tail_bound", 0.0));
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

Json to_json(const ConeDescription& c) { return {{"dim", c.dim}, {"H", vecs(c.H)}, {"Z", vecs(c.Z)}}; }

ConeDescription cone_from_json(const Json& j) {
    try {
        auto H = vecs_from(j, "H");
        auto Z = vecs_from(j, "Z");
        std::size_t dim = 0;
        if (j.contains("dim"))
            dim = get<std::size_t>(j, "dim");
        else if (!Z.empty())
            dim = Z.front().size();
        else if (!H.empty())
            dim = H.front().size();
        return ConeDescription::make(dim, std::move(H), std::move(Z));
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

Json to_json(const Region& r) {
    return std::visit(
        [](const auto& s) -> Json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Box>) {
                return {{"box", {{"lo", s.lo}, {"hi", s.hi}}}};
            } else if constexpr (std::is_same_v<S, Polytope>) {
                return {{"polytope", {{"A", vecs(s.A)}, {"b", s.b}}}};
            } else {
                Json segs = Json::array();
                for (const auto& [a, b] : s.segments) segs.push_back({a, b});
                return {{"segments", segs}};
            }
        },
        r.shape());
}

Region region_from_json(const Json& j) {
    try {
        if (j.contains("box")) return Region(Box{get<Vec>(j["box"], "lo"), get<Vec>(j["box"], "hi")});
        if (j.contains("polytope")) return Region(Polytope{vecs_from(j["polytope"], "A"), get<Vec>(j["polytope"], "b")});
        if (j.contains("segments")) {
            SegmentList sl;
            for (const auto& s : j["segments"]) sl.segments.emplace_back(s.at(0).get<Vec>(), s.at(1).get<Vec>());
            return Region(sl);
        }
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad region: ") + e.what());
    }
    throw ConfigError("region needs one of box, polytope, segments");
}

Json to_json(const ExpFamilySpec& s) {
    Json stats = Json::array();
    for (const auto& c : s.T.coords) {
        if (c.kind == StatCoord::Kind::Table)
            stats.push_back({{"table_lo", c.lo}, {"values", c.values}});
        else
            stats.push_back(c.name());
    }
    Json j{{"stats", stats},     {"support", support_name(s.T.support)},
           {"cone", to_json(s.cone)}, {"region", to_json(s.base_region)},
           {"rho", s.rho},       {"L", s.L},
           {"B", s.B},           {"gamma", s.gamma},
           {"Lambda", s.Lambda}};
    if (s.theta) j["theta"] = *s.theta;
    return j;
}

ExpFamilySpec family_from_json(const Json& j, const Constants& k) {
    ExpFamilySpec s;
    try {
        if (j.contains("catalog")) {
            const auto name = get<std::string>(j, "catalog");
            if (name == "geometric")
                s = catalog::geometric(get<double>(j, "a_lo"), get<double>(j, "a_hi"));
            else if (name == "zeta")
                s = catalog::zeta(get<double>(j, "a_lo"), get<double>(j, "a_hi"));
            else if (name == "laplacian")
                s = catalog::laplacian(get<double>(j, "a_lo"), get<double>(j, "a_hi"));
            else if (name == "discrete_gaussian")
                s = catalog::discrete_gaussian(Box{get<Vec>(j, "box_lo"), get<Vec>(j, "box_hi")});
            else
                throw ConfigError("unknown catalog family '" + name + "'");
        } else {
            for (const auto& c : get<Json>(j, "stats")) {
                if (c.is_string())
                    s.T.coords.push_back(StatCoord::catalog(c.get<std::string>()));
                else
                    s.T.coords.push_back(StatCoord::table(get<std::int64_t>(c, "table_lo"), get<std::vector<double>>(c, "values")));
            }
            s.T.support = support_from(get_or<std::string>(j, "support", "nonnegative"));
            s.cone = cone_from_json(get<Json>(j, "cone"));
            s.base_region = region_from_json(get<Json>(j, "region"));
            s.rho = get<double>(j, "rho");
            s.L = get<double>(j, "L");
        }
        // explicit values override catalog ones
        if (j.contains("rho")) s.rho = get<double>(j, "rho");
        if (j.contains("L")) s.L = get<double>(j, "L");
        if (j.contains("B")) s.B = get<double>(j, "B");
        if (j.contains("gamma")) s.gamma = get<double>(j, "gamma");
        if (j.contains("Lambda")) s.Lambda = get<double>(j, "Lambda");
        if (j.contains("theta")) s.theta = get<double>(j, "theta");
        if (get_or<bool>(j, "fit", false)) catalog::fit_constants(s, {}, k);
        // a negative L is left for verify_assumptions to report
        ExpFamilySpec probe = s;
        probe.L = std::max(probe.L, 0.0);
        probe.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Json to_json(const SIIRVSpec& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms) {
        if (const auto* a = std::get_if<ParamVector>(&t))
            terms.push_back({{"param", *a}});
        else
            terms.push_back({{"table", to_json(std::get<PMFTable>(t))}});
    }
    return {{"terms", terms}, {"order_bound", s.order_bound}};
}

SIIRVSpec siirv_from_json(const Json& j) {
    SIIRVSpec s;
    for (const auto& t : get<Json>(j, "terms")) {
        if (t.contains("param"))
            s.terms.emplace_back(get<ParamVector>(t, "param"));
        else
            s.terms.emplace_back(table_from_json(get<Json>(t, "table")));
    }
    s.order_bound = get_or<std::uint64_t>(j, "order_bound", s.terms.size());
    try {
        s.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Json to_json(const GaussParams& g) { return {{"mu", g.mu}, {"sigma2", g.sigma2}}; }

GaussParams gauss_from_json(const Json& j) {
    GaussParams g{get<double>(j, "mu"), get<double>(j, "sigma2")};
    if (!(g.sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
    return g;
}

Json to_json(const Constants& k) {
    return {{"c_tail", k.c_tail},
            {"c_part", k.c_part},
            {"c_rcrit", k.c_rcrit},
            {"c_h", k.c_h},
            {"c_n", k.c_n},
            {"c_siiurv", k.c_siiurv},
            {"c_massage", k.c_massage},
            {"candidate_budget", k.candidate_budget},
            {"grid_cap", k.grid_cap},
            {"materialize_cap", k.materialize_cap},
            {"mode_scan_extra", k.mode_scan_extra}};
}

Constants constants_from_json(const Json& j, const Constants& base) {
    if (!j.is_object()) throw ConfigError("constants must be a JSON object");
    Constants k = base;
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "c_tail") k.c_tail = v.get<double>();
            else if (key == "c_part") k.c_part = v.get<double>();
            else if (key == "c_rcrit") k.c_rcrit = v.get<double>();
            else if (key == "c_h") k.c_h = v.get<double>();
            else if (key == "c_n") k.c_n = v.get<std::array<double, 4>>();
            else if (key == "c_siiurv") k.c_siiurv = v.get<double>();
            else if (key == "c_massage") k.c_massage = v.get<double>();
            else if (key == "candidate_budget") k.candidate_budget = v.get<std::uint64_t>();
            else if (key == "grid_cap") k.grid_cap = v.get<std::uint64_t>();
            else if (key == "materialize_cap") k.materialize_cap = v.get<std::uint64_t>();
            else if (key == "mode_scan_extra") k.mode_scan_extra = v.get<int>();
            else throw ConfigError("unknown constant '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("bad value for constant '" + key + "': " + e.what());
        }
    }
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("constant ") + name + " must be positive");
    };
    positive(k.c_tail, "c_tail");
    positive(k.c_part, "c_part");
    positive(k.c_h, "c_h");
    positive(k.c_siiurv, "c_siiurv");
    positive(k.c_massage, "c_massage");
    for (double c : k.c_n) positive(c, "c_n");
    if (k.c_rcrit < 0.0) throw ConfigError("constant c_rcrit must be non-negative");
    return k;
}

Json to_json(const CoverSet& c) {
    Json points = Json::array();
    for (const auto& p : c.sparse.points) points.push_back(p);
    Json j{{"eps", c.eps},
           {"n", c.n},
           {"critical", {{"n1", c.crit.n1}, {"n2", c.crit.n2}, {"n3", c.crit.n3}, {"n4", c.crit.n4}, {"n_crit", c.crit.n_crit}}},
           {"sparse",
            {{"param_points", points},
             {"n_crit", c.sparse_order},
             {"radius_tv", c.sparse.radius_tv},
             {"radius_euclid", c.sparse.radius_euclid},
             {"r_crit", c.sparse.r_crit}}}};
    if (c.dense_enabled) {
        j["dense"] = {{"lattice",
                       {{"lo", c.dense.lo},
                        {"hi", c.dense.hi},
                        {"pitch", c.dense.pitch},
                        {"radius", c.dense.radius},
                        {"counts", c.dense.counts}}},
                      {"m_min", c.m_min},
                      {"m_max", c.m_max}};
    } else {
        j["dense"] = nullptr;
    }
    return j;
}

CoverSet cover_from_json(const Json& j) {
    CoverSet c;
    c.eps = get<double>(j, "eps");
    c.n = get<std::uint64_t>(j, "n");
    const Json& cr = get<Json>(j, "critical");
    c.crit = {get<double>(cr, "n1"), get<double>(cr, "n2"), get<double>(cr, "n3"), get<double>(cr, "n4"),
              get<std::uint64_t>(cr, "n_crit")};
    const Json& sp = get<Json>(j, "sparse");
    c.sparse.points = vecs_from(sp, "param_points");
    c.sparse_order = get<std::uint64_t>(sp, "n_crit");
    c.sparse.radius_tv = get<double>(sp, "radius_tv");
    c.sparse.radius_euclid = get<double>(sp, "radius_euclid");
    c.sparse.r_crit = get<double>(sp, "r_crit");
    c.sparse.build_index();
    if (j.contains("dense") && !j["dense"].is_null()) {
        const Json& d = j["dense"];
        const Json& l = get<Json>(d, "lattice");
        c.dense_enabled = true;
        c.dense.lo = get<Vec>(l, "lo");
        c.dense.hi = get<Vec>(l, "hi");
        c.dense.pitch = get<double>(l, "pitch");
        c.dense.radius = get<double>(l, "radius");
        c.dense.counts = get<std::vector<std::int64_t>>(l, "counts");
        c.m_min = get<std::int64_t>(d, "m_min");
        c.m_max = get<std::int64_t>(d, "m_max");
    }
    return c;
}

Json to_json(const SiiurvCover& c) {
    Json j{{"terms", c.terms},       {"eps", c.eps},
           {"n_crit", c.n_crit},     {"regime", c.sparse ? "sparse" : "dense"},
           {"w", c.w},               {"half_width", c.half_width},
           {"interval_size", c.interval_size}, {"pitch", c.pitch},
           {"mode_sum_lo", c.s_lo},  {"mode_sum_hi", c.s_hi},
           {"log_count", c.log_count()}};
    j["dense"] = c.dense ? to_json(*c.dense) : Json(nullptr);
    return j;
}

Json to_json(const MassageResult& m) {
    return {{"probs", m.probs},
            {"replaced", m.replaced},
            {"kept", m.kept},
            {"dropped", m.dropped},
            {"mean_replaced", m.mean_replaced},
            {"mean_replacement", m.mean_replacement},
            {"expectation_gap", m.expectation_gap},
            {"tv_overhead", m.tv_overhead}};
}

Json to_json(const PairRecord& r) {
    return {{"first", r.first}, {"second", r.second}, {"p1", r.p1},          {"p2", r.p2},
            {"tau", r.tau},     {"decision", to_string(r.decision)}, {"samples", r.samples}};
}

Json to_json(const HypothesisReport& r) {
    Json pairs = Json::array();
    for (const auto& p : r.pairs) pairs.push_back(to_json(p));
    return {{"winner", r.winner},
            {"never_lost", r.never_lost},
            {"losses", r.losses},
            {"pairs", pairs},
            {"samples_used", r.samples_used}};
}

Json to_json(const AssumptionReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"condition", e.condition}, {"passed", e.passed}, {"witness", e.witness}, {"detail", e.detail}});
    return {{"all_passed", r.all_passed()}, {"entries", entries}};
}

Json to_json(const MeanVar& m) { return {{"mu", m.mu}, {"sigma2", m.sigma2}, {"samples", m.samples}}; }

std::uint64_t config_hash(const Json& j) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace siirv::io

namespace siirv {

Constants Constants::from_json_text(const std::string& text, const Constants& base) {
    io::Json j;
    try {
        j = io::Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid constants JSON: ") + e.what());
    }
    return io::constants_from_json(j, base);
}

Constants Constants::from_json_text(const std::string& text) { return from_json_text(text, Constants{}); }

std::string Constants::to_json_text() const { return io::to_json(*this).dump(); }

Constants constants_from_env() {
    const char* path = std::getenv("SIIRV_LAB_CONSTANTS");
    if (!path || !*path) return Constants{};
    return io::constants_from_json(io::read_file(path));
}

}  // namespace siirv
