#include "wald/discounting.hpp"

#include <fmt/format.h>

namespace wald {

void DiscountedProblem::validate() const {
    if (!(r > 0.0)) throw DomainError(fmt::format("discount rate must be positive, got {}", r));
    if (!(k > 0.0)) throw DomainError(fmt::format("k must be positive, got {}", k));
}

double disc_value(double ell, const DiscountedProblem& dp) {
    dp.validate();
    if (!(ell >= 0.0)) throw DomainError(fmt::format("threshold must be nonnegative, got {}", ell));
    return 0.5 * std::exp(0.5 * ell) / std::cosh(0.5 * ell * dp.kappa_disc());
}

double disc_boundary(const DiscountedProblem& dp) {
    dp.validate();
    const double kappa = dp.kappa_disc();
    return 2.0 * std::atanh(1.0 / kappa) / kappa;
}

StopStats disc_stats(const DiscountedProblem& dp) {
    const double ell = disc_boundary(dp);
    return {
        .accuracy = 1.0 / (1.0 + std::exp(-ell)),
        .expected_time = ell * std::tanh(0.5 * ell) / (2.0 * dp.k * dp.k),
        .prob_choose_a = 0.5, // symmetric thresholds
        .source = StatsSource::closed_form,
    };
}

} // namespace wald
