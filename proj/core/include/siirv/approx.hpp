#pragma once

#include <span>
#include <vector>

#include "siirv/pmf.hpp"

namespace siirv {

struct GaussParams {
    double mu = 0.0;
    double sigma2 = 1.0;
};

// Normal law rounded to the nearest integer: pmf(x) = Phi((x+1/2-mu)/sigma) - Phi((x-1/2-mu)/sigma).
PMFTable disc_gauss_pmf(const GaussParams& g, double tail_target = 1e-12);

// Upper bound on TV between two rounded normals; the smaller variance is used as sigma1.
double tv_gauss_bound(const GaussParams& g1, const GaussParams& g2);

// Upper bound on TV between Poisson(l1) and Poisson(l2): sinh(|l1 - l2|).
double tv_poisson_bound(double l1, double l2);

// Upper bound on TV(X, X + 1) for a sum whose terms put mass d_i on their modes.
double shift_distance_bound(std::span<const double> mode_masses);

struct MomentSummary {
    double mu = 0.0;
    double sigma2 = 0.0;
    double beta = 0.0;         // sum of E|X_i - E X_i|^3
    double shift_delta = 0.0;  // max_i TV(X - X_i, X - X_i + 1)
};

double berry_esseen_bound(const MomentSummary& s);

// Exact summary of a sum of independent terms; shift_delta uses leave-one-out convolutions.
MomentSummary summarize_sum(std::span<const PMFTable> terms);

PMFTable poisson_pmf(double lambda, double tail_target = 1e-12);

// Poisson approximation bound for a sum of geometrics with success probabilities p_i.
struct PoissonApprox {
    double lambda = 0.0;
    double bound = 0.0;
};
PoissonApprox poisson_approx_bound(std::span<const double> success_probs);

// Success-probability parametrised geometric on {0, 1, ...}.
PMFTable geometric_pmf(double p, double tail_target = 1e-12);

// A bound evaluated next to its brute-force counterpart.
struct BoundCheck {
    double bound = 0.0;
    double oracle = 0.0;
    double slack = 0.0;
    bool holds = false;
};

BoundCheck check_tv_gauss(const GaussParams& g1, const GaussParams& g2);
BoundCheck check_tv_poisson(double l1, double l2);
BoundCheck check_shift_distance(std::span<const PMFTable> terms);
BoundCheck check_berry_esseen(std::span<const PMFTable> terms);
BoundCheck check_poisson_approx(std::span<const double> success_probs);

}  // namespace siirv
