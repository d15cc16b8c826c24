#pragma once

#include "siirv/expfam.hpp"

namespace siirv {

// (rho + 1/theta) ln(1/eps) + ln(B) / (2 theta) + c_rcrit (rho + 1/theta), at least rho.
double critical_radius(const ExpFamilySpec& spec, double eps, const Constants& k = {});

struct BoundedParameter {
    ParamVector b;
    bool projected = false;
    ProjectionCertificate certificate;  // filled when projected
};

// Parameters beyond the critical radius are pulled back onto its sphere;
// the member moves by at most eps in structural distance.
BoundedParameter bound_parameter(const ExpFamilySpec& spec, const ParamVector& a, double eps, const Constants& k = {});

}  // namespace siirv
