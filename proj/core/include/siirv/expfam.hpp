#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siirv/cone.hpp"
#include "siirv/constants.hpp"
#include "siirv/linalg.hpp"
#include "siirv/pmf.hpp"
#include "siirv/region.hpp"

namespace siirv {

enum class Support { Integers, NonNegative, Positive };

// One coordinate of the sufficient statistic T.
struct StatCoord {
    enum class Kind { Identity, Square, Abs, Log, Table };
    Kind kind = Kind::Identity;
    std::int64_t lo = 0;        // Table only
    std::vector<double> values;  // Table only

    static StatCoord catalog(const std::string& name);  // "x", "x2", "abs", "log"
    static StatCoord table(std::int64_t lo, std::vector<double> values);
    std::string name() const;
    // Throws InvalidInput outside an explicit table's window or for log at x <= 0.
    double eval(std::int64_t x) const;
};

struct SufficientStats {
    std::vector<StatCoord> coords;
    Support support = Support::NonNegative;

    std::size_t dim() const { return coords.size(); }
    Vec eval(std::int64_t x) const;
    double energy(const ParamVector& a, std::int64_t x) const;
    // Effective support after intersecting with explicit table windows.
    std::int64_t support_lo() const;
    std::optional<std::int64_t> support_hi() const;
    bool bounded_below() const { return support != Support::Integers || has_table(); }
    bool has_table() const;
};

// Member pmf is proportional to exp(-a . T(x)) on the support.
struct ExpFamilySpec {
    SufficientStats T;
    ConeDescription cone;
    Region base_region;
    double rho = 1.0;
    double L = 1.0;       // modes lie in [-L, L]
    double B = 1.0;       // fourth central moment bound
    double gamma = 1.0;   // variance floor on the base region
    double Lambda = 1.0;  // covariance eigenvalue bound
    std::optional<double> theta;

    std::size_t dim() const { return T.dim(); }
    void validate() const;
    // Declared theta or the cone's theta.
    double theta_value() const;
    bool in_rho_cone(const ParamVector& a) const;
};

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

IntRange mode_scan_window(const ExpFamilySpec& spec, const Constants& k = {});

// Minimisers of a . T over the scan window, without assumption checks.
std::vector<std::int64_t> minimizers(const ExpFamilySpec& spec, const ParamVector& a, IntRange window);

// Modes of a member; a must be in the rho-cone and every mode in [-L, L].
std::vector<std::int64_t> mode(const ExpFamilySpec& spec, const ParamVector& a, const Constants& k = {});

// Windowed, normalised pmf whose missed mass is certified below tail_target.
PMFTable pmf_member(const ExpFamilySpec& spec, const ParamVector& a, double tail_target = 1e-12,
                    const Constants& k = {}, std::size_t cap = kDefaultWindowCap);
// Same table without rho-cone or mode-range checks (for verifiers and hull points).
PMFTable pmf_member_unchecked(const ExpFamilySpec& spec, const ParamVector& a, double tail_target = 1e-12,
                              const Constants& k = {}, std::size_t cap = kDefaultWindowCap);

struct TailRadiusParams {
    double kappa = 0.0;
    double eta = 0.5;
    double s = 0.0;
    double B = 1.0;
    double c_tail = 4.0;
};

// ceil(c_tail * exp(kappa / (3 - eta - s)) * B^(5 / (4 (3 - eta - s)))).
std::int64_t tail_radius(const TailRadiusParams& p);

// Smallest eps such that at every x both mode-normalised weights are <= eps
// or they agree; 1 when the mode sets differ.
double structural_distance(const ExpFamilySpec& spec, const ParamVector& a, const ParamVector& b, IntRange window,
                           const Constants& k = {});

struct AssumptionEntry {
    std::string condition;
    bool passed = true;
    std::string witness;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;
    bool all_passed() const;
};

AssumptionReport verify_assumptions(const ExpFamilySpec& spec, const std::vector<ParamVector>& samples,
                                    IntRange window, const Constants& k = {});

struct PartitionCheck {
    double value = 0.0;  // sum_x exp(-a . (T(x) - T(M)))
    double bound = 0.0;  // c_part * B^(1/4)
    bool holds = false;
};

PartitionCheck partition_bound_check(const ExpFamilySpec& spec, const ParamVector& a, const Constants& k = {});

// Covariance of T under a table.
Matrix stat_covariance(const SufficientStats& T, const PMFTable& p);
double stat_covariance_max_eig(const SufficientStats& T, const PMFTable& p);

}  // namespace siirv
