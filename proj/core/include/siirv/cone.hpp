#pragma once

#include <cstddef>
#include <vector>

#include "siirv/linalg.hpp"

namespace siirv {

// Polyhedral cone in both halfspace form {a : h_i . a >= 0} and generator
// form cone(z_1..z_s). Generators are stored with unit norm.
struct ConeDescription {
    std::size_t dim = 0;
    std::vector<Vec> H;  // inward normals h_i
    std::vector<Vec> Z;  // unit generators z_j

    // Normalises generators and checks h_i . z_j >= -1e-10.
    static ConeDescription make(std::size_t dim, std::vector<Vec> H, std::vector<Vec> Z);
    // Single ray through `dir`.
    static ConeDescription ray(const Vec& dir);

    bool contains(const Vec& a, double tol = 1e-10) const;
};

struct ThetaResult {
    double theta = 0.0;
    double theta1 = 0.0;
    double N = 0.0;
    Vec x;  // generator weights, all >= 1
    Vec w;  // Zx / N
    bool all_orthogonal = false;
};

// Throws DegenerateCone for the trivial cone {0}.
ThetaResult theta_for_cone(const ConeDescription& cone);

struct ProjectionCertificate {
    double theta_used = 0.0;
    std::vector<std::size_t> active_set;
    double c = 0.0;
    Vec u_prime;
    int retries = 0;
};

// Moves u (in the cone, |u| >= r) onto the sphere of radius r while keeping
// every far-from-boundary halfspace far and every near one unchanged.
ProjectionCertificate project_to_sphere(const ConeDescription& cone, const ThetaResult& theta, const Vec& u, double r);

// Clause-by-clause check of a projection certificate.
bool certificate_holds(const ConeDescription& cone, const ProjectionCertificate& cert, const Vec& u, double r,
                       double tol = 1e-9);

}  // namespace siirv
