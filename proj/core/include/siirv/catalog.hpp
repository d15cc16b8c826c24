#pragma once

#include "siirv/expfam.hpp"

namespace siirv::catalog {

struct FitOptions {
    double margin = 0.1;      // B and Lambda scaled up, gamma scaled down by this fraction
    int directions = 16;      // interpolated directions between generator pairs
    int norm_steps = 48;      // log-spaced norms per direction
    double norm_span = 64.0;  // largest scanned norm as a multiple of the region's max norm
    int region_grid = 9;      // points per axis on the base region
};

// Scans the rho-cone and the base region numerically and writes B, gamma and
// Lambda with safety margins. rho, L, cone and region must already be set.
void fit_constants(ExpFamilySpec& spec, const FitOptions& opt = {}, const Constants& k = {});

// T(x) = x on {0, 1, ...}; base region [a_lo, a_hi].
ExpFamilySpec geometric(double a_lo, double a_hi);
// T(x) = ln x on {1, 2, ...}; requires a_lo > 5.
ExpFamilySpec zeta(double a_lo, double a_hi);
// T(x) = |x| on the integers.
ExpFamilySpec laplacian(double a_lo, double a_hi);
// T(x) = (x, x^2) on the integers with cone {a2 >= |a1|}; the box must sit inside it.
ExpFamilySpec discrete_gaussian(const Box& box);

// Closed forms for the geometric member with parameter a (q = e^-a).
double geometric_mean(double a);
double geometric_variance(double a);
double geometric_fourth_central(double a);

}  // namespace siirv::catalog
