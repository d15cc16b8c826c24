#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "siirv/covers.hpp"
#include "siirv/siirv.hpp"
#include "siirv/siiurv.hpp"

namespace siirv {

// Draws from the unknown distribution, counted against a hard cap.
class SampleOracle {
public:
    using Draw = std::function<std::int64_t(Rng&)>;

    SampleOracle(Draw draw, std::uint64_t cap);
    static SampleOracle from_table(const PMFTable& p, std::uint64_t cap);

    std::int64_t draw(Rng& rng);
    std::vector<std::int64_t> draw(Rng& rng, std::uint64_t count);
    std::uint64_t used() const { return used_; }
    std::uint64_t cap() const { return cap_; }

private:
    Draw draw_;
    std::uint64_t cap_;
    std::uint64_t used_ = 0;
};

struct LearnConfig {
    double eps = 0.1;
    double delta = 0.1;
    double beta = 0.0;  // evaluation oracle error; tables are exact so this stays 0
    std::uint64_t sample_budget_cap = 100000000;
    std::uint64_t seed = 0;
    bool reuse_samples = false;    // one sample pool for all tournament pairs
    std::size_t prescreen_keep = 8;  // candidates surviving the coarse stage
    Constants constants;

    void validate() const;
};

struct MeanVar {
    double mu = 0.0;
    double sigma2 = 0.0;
    std::uint64_t samples = 0;
};

// Median over ceil(18 ln(2/delta)) rounds of ceil(3/eps^2) draws each.
MeanVar estimate_mean_var(SampleOracle& x, double eps, double delta, Rng& rng);

enum class Decision { H1, H2, Draw };
std::string to_string(Decision d);

struct PairRecord {
    std::size_t first = 0, second = 0;
    double p1 = 0.0, p2 = 0.0, tau = 0.0;
    Decision decision = Decision::Draw;
    std::uint64_t samples = 0;
};

std::uint64_t selection_samples(double eps, double delta, const Constants& k = {});

// Scheffe-style test on W1 = {x : H1(x) > H2(x)}; draws resolve to H1.
PairRecord select_hypothesis(SampleOracle& x, const PMFTable& h1, const PMFTable& h2, double eps, double delta,
                             Rng& rng, const Constants& k = {});
// Same test on a given sample set.
PairRecord select_on_samples(const std::vector<std::int64_t>& xs, const PMFTable& h1, const PMFTable& h2, double eps);

struct HypothesisReport {
    std::size_t winner = 0;
    bool never_lost = true;  // false when the winner has the fewest losses instead
    std::vector<PairRecord> pairs;
    std::vector<std::uint32_t> losses;
    std::uint64_t samples_used = 0;
};

// All pairs at confidence delta / M^2.
HypothesisReport tournament(SampleOracle& x, const std::vector<PMFTable>& hyps, double eps, double delta, Rng& rng,
                            bool reuse_samples = false, const Constants& k = {});

struct SiiurvLearnResult {
    PMFTable hypothesis;
    std::string branch;  // "sparse" or "dense"
    bool sparse_ran = false;
    MeanVar estimate;
    HypothesisReport sparse_report;
    PairRecord final_pair;
    std::uint64_t samples_used = 0;
};

SiiurvLearnResult learn_siiurv(SampleOracle& x, std::uint64_t n, const SiiurvParams& p, const LearnConfig& cfg);

struct SiiervLearnResult {
    SIIRVSpec output;
    PMFTable hypothesis;
    std::string branch;
    MeanVar estimate;
    HypothesisReport sparse_report, dense_report;
    PairRecord final_pair;
    std::uint64_t order_cap = 0;  // ceil(n sqrt(B) / gamma)
    std::uint64_t x_samples_estimate = 0, x_samples_sparse = 0, x_samples_final = 0;
    std::uint64_t samples_used = 0;
};

// Output terms all lie in the rho-cone of the parameter space.
SiiervLearnResult learn_siierv(SampleOracle& x, const ExpFamilySpec& spec, std::uint64_t n, const LearnConfig& cfg);

}  // namespace siirv
