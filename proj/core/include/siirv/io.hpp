#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "siirv/covers.hpp"
#include "siirv/expfam.hpp"
#include "siirv/learning.hpp"
#include "siirv/pnbd.hpp"
#include "siirv/siirv.hpp"
#include "siirv/siiurv.hpp"

namespace siirv::io {

using Json = nlohmann::json;

// Malformed documents raise ConfigError.
Json to_json(const PMFTable& p);
PMFTable table_from_json(const Json& j);

Json to_json(const ConeDescription& c);
ConeDescription cone_from_json(const Json& j);

Json to_json(const Region& r);
Region region_from_json(const Json& j);

// Explicit form. The reader also accepts {"catalog": name, ...} with
// a_lo/a_hi (one-dimensional families) or box_lo/box_hi (discrete Gaussian),
// and "fit": true to estimate B, gamma and Lambda numerically.
Json to_json(const ExpFamilySpec& s);
ExpFamilySpec family_from_json(const Json& j, const Constants& k = {});

Json to_json(const SIIRVSpec& s);
SIIRVSpec siirv_from_json(const Json& j);

Json to_json(const GaussParams& g);
GaussParams gauss_from_json(const Json& j);

Json to_json(const Constants& k);
Constants constants_from_json(const Json& j, const Constants& base = {});

// Sparse part as {param_points, n_crit}; dense part as the lattice in product form.
Json to_json(const CoverSet& c);
CoverSet cover_from_json(const Json& j);

Json to_json(const SiiurvCover& c);
Json to_json(const MassageResult& m);
Json to_json(const PairRecord& r);
Json to_json(const HypothesisReport& r);
Json to_json(const AssumptionReport& r);
Json to_json(const MeanVar& m);

// FNV-1a of the compact dump with sorted keys.
std::uint64_t config_hash(const Json& j);
std::string hex64(std::uint64_t v);

Json read_file(const std::string& path);

}  // namespace siirv::io
