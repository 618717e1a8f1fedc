#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wald {

/// Posterior-separable information cost on [1/2, 1], extended symmetrically,
/// normalized to c(1/2) = 0, with c' > 0 and c'' > 0 on (1/2, 1).
struct PosteriorCost {
    std::function<double(double)> c;
    std::function<double(double)> dc;
    std::string name;

    static PosteriorCost entropy();
    static PosteriorCost quadratic();
};

struct KappaCurvePoint {
    double kappa;
    double p_star;
    double c_star;
    double t_star; ///< kappa * c_star, the expected-time proxy
};

/// Optimal symmetric posterior: interior root of kappa*c'(p) = 2 when one
/// exists in (1/2, 1), corner p = 1 when information is cheap. Total: never
/// throws; kappa -> infinity gives p -> 1/2.
double optimal_posterior(double kappa, const PosteriorCost& cost);

std::vector<KappaCurvePoint> expected_time_curve(std::span<const double> kappa_grid,
                                                 const PosteriorCost& cost);

/// True iff c(p)/c'(p) is quasiconcave on the grid: successive differences
/// show at most one + to - sign change.
bool single_peaked_iff(const PosteriorCost& cost, std::span<const double> grid);

/// Grid argmax of the symmetric binary objective 2(p - 1/2) - kappa*c(p)
/// over [1/2, 1]; independent oracle for optimal_posterior.
double brute_force_posterior(double kappa, const PosteriorCost& cost,
                             std::size_t resolution);

} // namespace wald
