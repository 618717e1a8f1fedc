#pragma once

#include "wald/boundary.hpp"
#include "wald/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wald {

/// One incentive-perturbation measurement on a single problem.
struct ProbeReport {
    double baseline_share_b;
    double shifted_share_b;
    double delta; ///< shifted - baseline; nonnegative for a bonus on b
    double eps;
};

struct RankedProblem {
    std::string id;
    double delta;
    double std_err;              ///< 0 for model-derived deltas
    int rank;                    ///< 1 = most complex
    bool separation_significant; ///< gap to the next entry exceeds 2 combined SE
};

struct ComplexityRanking {
    std::vector<RankedProblem> entries; ///< descending delta
};

/// P(choose b) through the solver pipeline. Immediate-stop corners resolve to
/// stop-at-prior: 1 when ell_tilde > 0, 0 when < 0, 1/2 at indifference.
double choice_share_b(const CanonicalProblem& cp);

struct CrossPartial {
    double value;                    ///< Richardson-extrapolated estimate
    double step_halving_discrepancy; ///< |D(h/2) - D(h)|
};

/// Central cross-difference of P(choose b) in (p_tilde, k), with one
/// Richardson step. h_p is absolute in p_tilde; h_k_rel is relative in k.
/// Throws NumericalInstability if halving moves the estimate by > 10%.
CrossPartial cross_partial(const CanonicalProblem& cp, double h_p = 1e-4,
                           double h_k_rel = 1e-4);

/// Closed-form sensitivity of P(choose a) to exp(ell_tilde), evaluated at the
/// solved boundaries. Strictly negative; requires ell_hi > 0 > ell_lo.
double q_sensitivity_closed_form(const Boundaries& b);

/// Deltas from a bonus eps on alternative b, ranked descending (largest
/// response = most complex). Throws DegenerateShare on a 0/1 baseline share.
ComplexityRanking rank_problems(const std::vector<std::pair<std::string, Problem>>& problems,
                                double eps);

/// Default bonus for a problem: 1e-2 of its stakes.
double default_probe_eps(const Problem& problem);

struct ShareObservation {
    std::string id;
    double baseline_share_b;
    double shifted_share_b;
    std::int64_t n_obs;
};

/// Empirical front end: deltas with binomial standard errors; adjacent entries
/// within 2 combined SE are flagged as not significantly separated.
ComplexityRanking rank_from_data(const std::vector<ShareObservation>& shares);

} // namespace wald
