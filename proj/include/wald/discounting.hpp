#pragma once

#include "wald/errors.hpp"
#include "wald/stats.hpp"

#include <cmath>

namespace wald {

/// Exponential-discounting variant with indicator payoffs u(alt,state)=1{alt=state}.
struct DiscountedProblem {
    double r; ///< discount rate > 0
    double k; ///< signal-to-noise ratio mu/sigma > 0

    /// sqrt(2r(sigma/mu)^2 + 1); always > 1.
    double kappa_disc() const { return std::sqrt(2.0 * r / (k * k) + 1.0); }

    void validate() const;
};

/// Value of stopping at the symmetric log-odds threshold ell (from prior 1/2):
/// (1/2) exp(ell/2) sech(ell*kappa/2).
double disc_value(double ell, const DiscountedProblem& dp);

/// Optimal symmetric threshold, 2*artanh(1/kappa)/kappa.
double disc_boundary(const DiscountedProblem& dp);

/// Accuracy 1/(1+exp(-ell*)) and expected time ell*tanh(ell*/2)/(2k^2)
/// at the optimal threshold.
StopStats disc_stats(const DiscountedProblem& dp);

} // namespace wald
