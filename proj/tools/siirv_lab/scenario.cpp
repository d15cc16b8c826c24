#include "scenario.hpp"

#include "siirv/error.hpp"

namespace lab {

namespace {

Kind parse_kind(const std::string& s) {
    if (s == "cover") return Kind::Cover;
    if (s == "learn") return Kind::Learn;
    if (s == "verify") return Kind::Verify;
    if (s == "bench") return Kind::Bench;
    throw siirv::ConfigError("unknown scenario kind '" + s + "'");
}

template <class T>
T value(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw siirv::ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Scenario parse(Json j, std::size_t index, std::optional<std::uint64_t> seed_override, const siirv::Constants& base) {
    if (!j.is_object()) throw siirv::ConfigError("scenario must be a JSON object");
    if (seed_override) j["seed"] = *seed_override;
    if (!j.contains("seed")) throw siirv::ConfigError("scenario needs a seed");
    if (!j.contains("kind")) throw siirv::ConfigError("scenario needs a kind");

    Scenario s;
    s.raw = j;
    s.kind = parse_kind(value<std::string>(j, "kind", ""));
    s.name = value<std::string>(j, "name", kind_name(s.kind) + "_" + std::to_string(index));
    s.seed = value<std::uint64_t>(j, "seed", 0);
    s.constants = j.contains("constants") ? siirv::io::constants_from_json(j["constants"], base) : base;

    if (j.contains("family")) {
        s.family = siirv::io::family_from_json(j["family"], s.constants);
    }
    if (j.contains("pnbd")) {
        s.target = Target::Pnbd;
        const Json& p = j["pnbd"];
        s.p_low = value<double>(p, "p_low", 0.0);
        s.p_high = value<double>(p, "p_high", 0.9);
        if (!(s.p_low > 0.0) || !(s.p_low <= s.p_high) || !(s.p_high <= 1.0))
            throw siirv::ConfigError("pnbd needs 0 < p_low <= p_high <= 1");
    } else if (j.contains("siiurv")) {
        s.target = Target::Siiurv;
        const Json& p = j["siiurv"];
        s.siiurv.L = value<double>(p, "L", 1.0);
        s.siiurv.B = value<double>(p, "B", s.family ? s.family->B : 1.0);
        s.siiurv.gamma = value<double>(p, "gamma", s.family ? s.family->gamma : 0.1);
        s.siiurv.mode_lo = value<std::int64_t>(p, "mode_lo", 0);
        try {
            s.siiurv.validate();
        } catch (const siirv::InvalidInput& e) {
            throw siirv::ConfigError(e.what());
        }
        if (!s.family) throw siirv::ConfigError("siiurv scenarios draw their terms from a family");
    } else if (!s.family && s.kind != Kind::Bench) {
        throw siirv::ConfigError("scenario needs one of family, pnbd, siiurv");
    }

    s.n = value<std::uint64_t>(j, "n", 1);
    if (j.contains("eps") && j["eps"].is_array())
        s.eps = value<std::vector<double>>(j, "eps", {});
    else
        s.eps = {value<double>(j, "eps", 0.1)};
    for (double e : s.eps)
        if (!(e > 0.0) || !(e < 1.0)) throw siirv::ConfigError("eps must lie in (0, 1)");
    if (s.n == 0) throw siirv::ConfigError("n must be positive");
    s.delta = value<double>(j, "delta", 0.1);
    s.instances = value<std::size_t>(j, "instances", 10);
    s.iid = value<bool>(j, "iid", false);
    s.learner = value<std::string>(j, "learner", s.target == Target::Siiurv ? "siiurv" : "siierv");
    s.emit_cover = value<bool>(j, "emit_cover", false);
    s.grid = value<int>(j, "grid", 9);
    s.validators = value<int>(j, "validators", 50);
    s.repetitions = value<int>(j, "repetitions", 5);
    if (s.grid < 2 || s.validators < 1 || s.repetitions < 1) throw siirv::ConfigError("grid, validators, repetitions too small");

    s.learn.eps = s.eps.front();
    s.learn.delta = s.delta;
    s.learn.seed = s.seed;
    s.learn.constants = s.constants;
    if (j.contains("config")) {
        const Json& c = j["config"];
        s.learn.sample_budget_cap = value<std::uint64_t>(c, "sample_budget_cap", s.learn.sample_budget_cap);
        s.learn.reuse_samples = value<bool>(c, "reuse_samples", false);
        s.learn.prescreen_keep = value<std::size_t>(c, "prescreen_keep", s.learn.prescreen_keep);
        s.learn.beta = value<double>(c, "beta", 0.0);
    }
    for (double e : s.eps) {
        siirv::LearnConfig probe = s.learn;
        probe.eps = e;
        probe.validate();
    }
    return s;
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Cover: return "cover";
        case Kind::Learn: return "learn";
        case Kind::Verify: return "verify";
        default: return "bench";
    }
}

std::vector<Scenario> load_scenarios(const std::string& path, std::optional<std::uint64_t> seed_override,
                                     const siirv::Constants& constants) {
    const Json doc = siirv::io::read_file(path);
    std::vector<Scenario> out;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse(doc[i], i, seed_override, constants));
    } else {
        out.push_back(parse(doc, 0, seed_override, constants));
    }
    return out;
}

}  // namespace lab
