#pragma once

#include "wald/core.hpp"

#include <utility>

namespace wald {

/// Optimal log-odds stopping thresholds with solver diagnostics.
struct Boundaries {
    double ell_lo;       ///< lower threshold
    double ell_hi;       ///< upper threshold
    double residual_1;   ///< absolute residual of the cost equation
    double residual_2;   ///< absolute residual of the indifference equation
    bool immediate_stop; ///< true when the prior log-odds 0 is outside (ell_lo, ell_hi)
};

/// Integration constants of the closed-form continuation value.
struct ValueCoefficients {
    double beta0;
    double beta1;
};

/// Solves the two-equation free-boundary system for the optimal thresholds.
///
/// Strategy: the two equations each define the lower threshold implicitly as a
/// function of the upper one; the first branch is increasing, the second
/// decreasing, so an outer bisection on the upper threshold is globally
/// convergent. A 2D Newton polish then drives both residuals to the target.
///
/// Throws ConvergenceFailure (with an iteration trace in the message) if the
/// residual target 1e-10 is not met.
Boundaries solve_boundaries(const CanonicalProblem& cp);

/// Residuals of the two boundary equations, evaluated in stable hyperbolic form.
std::pair<double, double> residuals(const Boundaries& b, const CanonicalProblem& cp);

ValueCoefficients value_coefficients(const Boundaries& b, const CanonicalProblem& cp);

/// Normalized value of the continuation problem at belief p: the closed form
/// inside (ell_lo, ell_hi), the stopping payoff (p - p_tilde)^+ outside.
double value_a(double p, const Boundaries& b, const CanonicalProblem& cp);

/// Exact derivative of value_a with respect to the belief p. Inside the
/// continuation region this differentiates the closed form (boundary points
/// included), outside it is the slope of the stopping payoff. Smooth pasting
/// holds iff this equals 0 at the lower and 1 at the upper threshold.
double value_a_slope(double p, const Boundaries& b, const CanonicalProblem& cp);

namespace detail {
/// exp(l) - exp(-l) + 2l, the monotone kernel of the cost equation.
double cost_kernel(double ell);
} // namespace detail

} // namespace wald
