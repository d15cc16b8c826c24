#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "siirv/approx.hpp"
#include "siirv/expfam.hpp"
#include "siirv/siirv.hpp"

namespace siirv {

// Bounded set given by a membership test and an enclosing box.
struct CoverRegion {
    std::function<bool(const Vec&)> contains;
    Vec lo, hi;
};

// Point set with a hashed grid index for near-neighbour queries.
class PointIndex {
public:
    PointIndex() = default;
    PointIndex(std::size_t dim, double cell);

    void insert(const Vec& p, std::uint32_t id);
    // True if some indexed point lies within `radius` (<= cell) of p.
    bool any_within(const Vec& p, double radius, const std::vector<Vec>& points) const;
    // Ids of up to `count` nearest points, closest first.
    std::vector<std::uint32_t> nearest(const Vec& p, std::size_t count, const std::vector<Vec>& points) const;

private:
    std::size_t dim_ = 0;
    double cell_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
    std::vector<std::int64_t> lo_cell_, hi_cell_;

    std::vector<std::int64_t> cell_of(const Vec& p) const;
    std::uint64_t key(const std::vector<std::int64_t>& c) const;
};

// Greedy eps-net over a grid of pitch eps / (2 sqrt(k)) inside the region:
// every grid point of the region lies within eps of the output, and outputs
// are pairwise more than eps apart. GridOverflow past constants.grid_cap candidates.
std::vector<Vec> euclid_cover(const CoverRegion& region, double eps, std::uint64_t grid_cap = 10000000);

struct ParamCover {
    std::vector<ParamVector> points;
    double radius_tv = 0.0;      // every member of the covered set is this close in TV (via Pinsker)
    double radius_euclid = 0.0;  // Euclidean net radius
    double r_crit = 0.0;
    PointIndex index;

    void build_index();
    std::vector<std::uint32_t> nearest(const ParamVector& a, std::size_t count) const;
};

// Net of (rho-cone) intersected with the ball of the critical radius for accuracy eps.
ParamCover sparsify_family(const ExpFamilySpec& spec, double eps, const Constants& k = {});

// (1 + 2 r_crit sqrt(Lambda / 2) / eps)^k
double sparse_size_bound(const ExpFamilySpec& spec, double eps, const Constants& k = {});

struct MomentMatch {
    ParamVector b;
    std::int64_t m = 0;
    double mean_b = 0.0;
    double var_b = 0.0;
    int steps = 0;
};

// Member b on the polyline whose variance-to-mean ratio equals var / mean
// (or with zero mean when mean == 0), and m = ceil(var / Var_b).
MomentMatch moment_match(double mean, double var, const ExpFamilySpec& spec, const std::vector<Vec>& path,
                         const Constants& k = {});

struct CriticalOrder {
    double n1 = 0.0, n2 = 0.0, n3 = 0.0, n4 = 0.0;
    std::uint64_t n_crit = 0;  // saturates at 2^62
};

CriticalOrder critical_order(const ExpFamilySpec& spec, double eps, const Constants& k = {});

// Implicit net of a box: a cubic lattice of pitch 2R/sqrt(k), clamped into the box.
struct LatticeNet {
    Vec lo, hi;
    double pitch = 0.0;
    double radius = 0.0;
    std::vector<std::int64_t> counts;

    static LatticeNet over_box(const Box& box, double radius);
    std::uint64_t size() const;
    ParamVector point(const std::vector<std::int64_t>& idx) const;
    std::vector<std::int64_t> nearest_index(const Vec& a) const;
    // Lattice points whose index differs from a's nearest by at most `reach` per axis.
    std::vector<ParamVector> neighbourhood(const Vec& a, int reach) const;
};

struct CoverSet {
    double eps = 0.0;
    std::uint64_t n = 0;
    CriticalOrder crit;
    std::uint64_t sparse_order = 0;  // multisets of at most this many cover points
    ParamCover sparse;
    bool dense_enabled = false;
    LatticeNet dense;
    std::int64_t m_min = 0, m_max = 0;

    // Number of sparse candidates, as a double since it overflows quickly.
    double sparse_candidate_count() const;
};

CoverSet cover_siierv(const ExpFamilySpec& spec, std::uint64_t n, double eps, const Constants& k = {});

struct NearestOptions {
    std::uint64_t budget = 50000;
    // Parameters of the target's terms; enables the per-term assignment search.
    std::optional<std::vector<ParamVector>> terms_hint;
    int dense_reach = 2;
    std::size_t dense_evaluations = 24;
};

struct NearestResult {
    TvResult tv{1.0, 0.0};
    std::string regime;  // "sparse" or "dense"
    std::vector<ParamVector> params;
    bool heuristic = false;
    std::uint64_t evaluated = 0;
};

NearestResult nearest_in_cover(const PMFTable& x, const CoverSet& cover, const ExpFamilySpec& spec,
                               const NearestOptions& opt = {}, const Constants& k = {});

}  // namespace siirv
