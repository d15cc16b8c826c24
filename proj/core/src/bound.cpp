#include "siirv/bound.hpp"

#include <algorithm>
#include <cmath>

#include "siirv/error.hpp"

namespace siirv {

double critical_radius(const ExpFamilySpec& spec, double eps, const Constants& k) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidInput("critical radius: eps must lie in (0, 1)");
    const double theta = spec.theta_value();
    const double lead = spec.rho + 1.0 / theta;
    const double r = lead * std::log(1.0 / eps) + std::log(spec.B) / (2.0 * theta) + k.c_rcrit * lead;
    return std::max(r, spec.rho);
}

BoundedParameter bound_parameter(const ExpFamilySpec& spec, const ParamVector& a, double eps, const Constants& k) {
    if (!spec.in_rho_cone(a)) throw InvalidInput("bound_parameter: parameter is outside the rho-cone");
    const double r = critical_radius(spec, eps, k);
    BoundedParameter out;
    if (norm(a) <= r) {
        out.b = a;
        return out;
    }
    ThetaResult th = theta_for_cone(spec.cone);
    if (spec.theta) th.theta = *spec.theta;
    out.certificate = project_to_sphere(spec.cone, th, a, r);
    out.b = out.certificate.u_prime;
    out.projected = true;
    return out;
}

}  // namespace siirv
