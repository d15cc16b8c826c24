#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siirv/io.hpp"

namespace lab {

using siirv::io::Json;

enum class Kind { Cover, Learn, Verify, Bench };

// What the instances are drawn from.
enum class Target { Family, Pnbd, Siiurv };

struct Scenario {
    std::string name;
    Kind kind = Kind::Cover;
    Target target = Target::Family;
    std::uint64_t seed = 0;
    Json raw;  // the scenario as read, seed override applied

    std::optional<siirv::ExpFamilySpec> family;
    double p_low = 0.0, p_high = 0.0;  // pnbd targets
    siirv::SiiurvParams siiurv;

    std::uint64_t n = 1;
    std::vector<double> eps;
    double delta = 0.1;
    std::size_t instances = 10;
    bool iid = false;  // learn targets: one parameter repeated n times
    std::string learner = "siierv";
    bool emit_cover = false;
    int grid = 9;          // verify: base-region grid per axis
    int validators = 50;   // verify: random instances per bound
    int repetitions = 5;   // bench
    siirv::LearnConfig learn;
    siirv::Constants constants;
};

// ConfigError on anything malformed.
std::vector<Scenario> load_scenarios(const std::string& path, std::optional<std::uint64_t> seed_override,
                                     const siirv::Constants& constants);

std::string kind_name(Kind k);

}  // namespace lab
