#include "wald/effort.hpp"

#include "wald/rootfind.hpp"
#include "wald/stats.hpp"

#include <cmath>
#include <fmt/format.h>

namespace wald {

CostSpec CostSpec::quadratic_fixed(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError(fmt::format("quadratic_fixed needs a, b > 0, got a={} b={}", a, b));
    return {
        .c = [a, b](double e) { return a + b * e * e; },
        .dc = [b](double e) { return 2.0 * b * e; },
        .d2c = [b](double) { return 2.0 * b; },
        .domain_lo = 0.0,
    };
}

void CostSpec::validate() const {
    if (!c || !dc || !d2c) throw DomainError("CostSpec: all three callables are required");
    const double probes[] = {domain_lo + 0.25, domain_lo + 1.0, domain_lo + 3.0};
    const double h = 1e-5;
    const double h2 = 1e-4; // wider step: the second difference divides by h^2
    for (double e : probes) {
        const double fd1 = (c(e + h) - c(e - h)) / (2.0 * h);
        const double fd2 = (c(e + h2) - 2.0 * c(e) + c(e - h2)) / (h2 * h2);
        const double d1 = dc(e);
        const double d2 = d2c(e);
        if (std::abs(fd1 - d1) > 1e-6 * std::max(1.0, std::abs(d1)))
            throw DomainError(fmt::format(
                "CostSpec derivative mismatch at e={}: dc={} vs finite difference {}", e, d1, fd1));
        if (std::abs(fd2 - d2) > 1e-6 * std::max(1.0, std::abs(d2)))
            throw DomainError(fmt::format(
                "CostSpec second derivative mismatch at e={}: d2c={} vs finite difference {}",
                e, d2, fd2));
        if (!(d1 > 0.0) || !(d2 > 0.0))
            throw DomainError(fmt::format("CostSpec needs c'>0 and c''>0; at e={}: c'={} c''={}",
                                          e, d1, d2));
    }
}

double solve_effort(const CostSpec& cost) {
    cost.validate();
    // Tangency e c'(e) = c(e). f(e) = e c'(e) - c(e) has f' = e c'' > 0, so the
    // root is unique; it exists only when f(0) = -c(0) < 0.
    const double e0 = cost.domain_lo;
    const auto f = [&](double e) { return e * cost.dc(e) - cost.c(e); };
    if (!(cost.c(e0) > 0.0))
        throw NoInteriorOptimum(fmt::format(
            "no interior effort optimum: c({}) = {} <= 0 makes e c'(e) > c(e) for all e > 0",
            e0, cost.c(e0)));
    double hi = std::max(1.0, e0 + 1.0);
    int doublings = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++doublings > 200)
            throw ConvergenceFailure("solve_effort: tangency bracket expansion failed");
    }
    return bisect(f, e0, hi);
}

Problem effective_problem(const Problem& problem, const AbilityProfile& ability,
                          const CostSpec& cost) {
    problem.validate();
    if (!(ability.lambda > 0.0))
        throw DomainError(fmt::format("ability must be positive, got {}", ability.lambda));
    const double e_star = solve_effort(cost);
    Problem eff = problem;
    eff.mu = std::sqrt(ability.lambda * e_star) * problem.mu;
    eff.c = cost.c(e_star);
    return eff;
}

std::pair<double, double> ability_thresholds(const Problem& problem, double lambda_lo,
                                             double lambda_hi, const CostSpec& cost) {
    if (!(lambda_hi >= lambda_lo) || !(lambda_lo > 0.0))
        throw DomainError(fmt::format("need lambda_hi >= lambda_lo > 0, got {} and {}",
                                      lambda_lo, lambda_hi));
    const double e_star = solve_effort(cost);
    // Peak of expected time in the effective signal-to-noise ratio, for the
    // problem with flow cost c(e*).
    Problem eff = problem;
    eff.c = cost.c(e_star);
    const CanonicalProblem cp = canonicalize(eff);
    const double k_star = find_peak_complexity(cp.c_tilde, cp.ell_tilde, 1e-3, 1e3);
    return {k_star / std::sqrt(lambda_hi * e_star), k_star / std::sqrt(lambda_lo * e_star)};
}

} // namespace wald
