#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "siirv/cone.hpp"
#include "siirv/linalg.hpp"
#include "siirv/rng.hpp"

namespace siirv {

struct Box {
    Vec lo, hi;
};

// {x : A x <= b}, assumed bounded.
struct Polytope {
    std::vector<Vec> A;
    Vec b;
};

// Union of closed segments; consecutive segments are expected to share an endpoint.
struct SegmentList {
    std::vector<std::pair<Vec, Vec>> segments;
};

// Parameter region for the base set of an exponential family.
class Region {
public:
    using Shape = std::variant<Box, Polytope, SegmentList>;

    Region() = default;
    explicit Region(Shape shape);

    const Shape& shape() const { return shape_; }
    std::size_t dim() const { return dim_; }

    bool contains(const Vec& a, double tol = 1e-12) const;
    const Vec& box_lo() const { return bb_lo_; }
    const Vec& box_hi() const { return bb_hi_; }
    double max_norm() const;
    Vec sample(Rng& rng) const;
    // Polyline inside the region, used as a default bisection path.
    std::vector<Vec> path() const;
    // Vertices (polytope), corners (box) or segment endpoints.
    const std::vector<Vec>& corners() const { return corners_; }

private:
    Shape shape_;
    std::size_t dim_ = 0;
    Vec bb_lo_, bb_hi_;
    std::vector<Vec> corners_;
};

// a lies in the base region, or in the cone with norm at least rho.
bool rho_cone_contains(const ConeDescription& cone, const Region& region, double rho, const Vec& a);

}  // namespace siirv
