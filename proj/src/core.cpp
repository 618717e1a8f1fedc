#include "wald/core.hpp"

#include <cmath>
#include <fmt/format.h>

namespace wald {

void PayoffMatrix::validate() const {
    if (!std::isfinite(u_aa) || !std::isfinite(u_ab) || !std::isfinite(u_ba) ||
        !std::isfinite(u_bb))
        throw InvalidPayoffs(fmt::format("payoff matrix has non-finite entries: "
                                         "u_aa={} u_ab={} u_ba={} u_bb={}",
                                         u_aa, u_ab, u_ba, u_bb));
    if (!(u_aa > u_ba) || !(u_bb > u_ab))
        throw InvalidPayoffs(fmt::format(
            "payoff matrix has a weakly dominant alternative: "
            "u_aa={} u_ba={} u_bb={} u_ab={}",
            u_aa, u_ba, u_bb, u_ab));
}

void Problem::validate() const {
    payoffs.validate();
    if (!(mu > 0.0)) throw DomainError(fmt::format("mu must be positive, got {}", mu));
    if (!(sigma > 0.0)) throw DomainError(fmt::format("sigma must be positive, got {}", sigma));
    if (!(c > 0.0)) throw DomainError(fmt::format("flow cost must be positive, got {}", c));
}

double log_odds(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError(fmt::format("belief must lie in (0,1), got {}", p));
    // log(p) - log1p(-p) keeps full precision near both endpoints.
    return std::log(p) - std::log1p(-p);
}

double belief_from_log_odds(double ell) {
    if (ell >= 0.0) return 1.0 / (1.0 + std::exp(-ell));
    const double e = std::exp(ell);
    return e / (1.0 + e);
}

double indifference_point(const PayoffMatrix& payoffs) {
    payoffs.validate();
    return (payoffs.u_bb - payoffs.u_ab) / payoffs.delta();
}

CanonicalProblem canonicalize(const Problem& problem) {
    problem.validate();
    const double delta = problem.payoffs.delta();
    return {
        .k = problem.mu / problem.sigma,
        .c_tilde = problem.c / (2.0 * delta),
        .ell_tilde = log_odds(indifference_point(problem.payoffs)),
    };
}

Problem apply_bonus(Problem problem, Alternative alternative, double eps) {
    if (alternative == Alternative::a) {
        problem.payoffs.u_aa += eps;
        problem.payoffs.u_ab += eps;
    } else {
        problem.payoffs.u_ba += eps;
        problem.payoffs.u_bb += eps;
    }
    return problem;
}

} // namespace wald
