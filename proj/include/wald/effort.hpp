#pragma once

#include "wald/core.hpp"

#include <functional>
#include <utility>

namespace wald {

/// One-dimensional convex effort cost with first and second derivatives.
/// Requires c' > 0 and c'' > 0 on the domain.
struct CostSpec {
    std::function<double(double)> c;
    std::function<double(double)> dc;
    std::function<double(double)> d2c;
    double domain_lo = 0.0;

    /// c(e) = a + b*e^2; the CLI's "quadratic_fixed:a,b".
    static CostSpec quadratic_fixed(double a, double b);

    /// Finite-difference consistency check of dc and d2c against c
    /// (1e-6 relative at a few sample points). Throws DomainError on mismatch.
    void validate() const;
};

struct AbilityProfile {
    double lambda; ///< ability > 0; higher means cheaper effort
};

/// Unique positive root of e*c'(e) = c(e), the constant optimal effort level.
/// Throws NoInteriorOptimum when c(0) <= 0 (convexity then leaves no tangency).
double solve_effort(const CostSpec& cost);

/// The problem an ability-lambda decision-maker effectively faces:
/// drift scaled by sqrt(lambda * e*), flow cost c(e*).
Problem effective_problem(const Problem& problem, const AbilityProfile& ability,
                          const CostSpec& cost);

/// Thresholds (k_under, k_over) on the raw signal-to-noise ratio: below
/// k_under the high-ability type stops later, above k_over earlier.
/// k_under = k*/sqrt(lambda_hi * e*), k_over = k*/sqrt(lambda_lo * e*), where
/// k* is the expected-time peak of the effective problem.
std::pair<double, double> ability_thresholds(const Problem& problem, double lambda_lo,
                                             double lambda_hi, const CostSpec& cost);

} // namespace wald
