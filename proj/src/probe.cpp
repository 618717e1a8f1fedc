#include "wald/probe.hpp"

#include "wald/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace wald {

double choice_share_b(const CanonicalProblem& cp) {
    const Boundaries b = solve_boundaries(cp);
    if (b.immediate_stop) {
        // Stop at the prior and pick the better alternative there.
        if (cp.ell_tilde > 0.0) return 1.0;
        if (cp.ell_tilde < 0.0) return 0.0;
        return 0.5;
    }
    return 1.0 - prob_choose_a(b);
}

namespace {

// Four-point central cross-difference of P(choose b) in (p_tilde, k).
double cross_difference(const CanonicalProblem& cp, double h_p, double h_k) {
    const double p_tilde = belief_from_log_odds(cp.ell_tilde);
    const auto share = [&](double pt, double k) {
        return choice_share_b({k, cp.c_tilde, log_odds(pt)});
    };
    const double k_hi = cp.k + h_k, k_lo = cp.k - h_k;
    const double p_hi = p_tilde + h_p, p_lo = p_tilde - h_p;
    return (share(p_hi, k_hi) - share(p_lo, k_hi) - share(p_hi, k_lo) + share(p_lo, k_lo)) /
           (4.0 * h_p * h_k);
}

} // namespace

CrossPartial cross_partial(const CanonicalProblem& cp, double h_p, double h_k_rel) {
    const double h_k = h_k_rel * cp.k;
    const double coarse = cross_difference(cp, h_p, h_k);
    const double fine = cross_difference(cp, 0.5 * h_p, 0.5 * h_k);
    // Central differences are O(h^2): one Richardson step.
    const double extrapolated = (4.0 * fine - coarse) / 3.0;
    const double discrepancy = std::abs(fine - coarse);
    if (discrepancy > 0.1 * std::max(std::abs(extrapolated), 1e-300))
        throw NumericalInstability(fmt::format(
            "cross_partial step halving moved the estimate from {} to {} at (k={}, p_tilde={})",
            coarse, fine, cp.k, belief_from_log_odds(cp.ell_tilde)));
    return {extrapolated, discrepancy};
}

double q_sensitivity_closed_form(const Boundaries& b) {
    const double hi = b.ell_hi, lo = b.ell_lo;
    if (!(hi > 0.0 && 0.0 > lo))
        throw DomainError(fmt::format(
            "q sensitivity needs ell_hi > 0 > ell_lo, got ({}, {})", lo, hi));
    const double width = hi - lo;
    const double common = std::pow(std::exp(hi) - std::exp(lo) +
                                       std::exp(hi + lo) * width, 2.0);
    const double csch_half = 1.0 / std::sinh(0.5 * width);
    const double wall = width + std::sinh(hi) - std::sinh(lo);
    const double term1 = std::exp(-2.5 * hi - 2.0 * lo) * (1.0 + std::exp(hi)) * common *
                         csch_half / std::cosh(0.5 * lo) * std::sinh(hi) /
                         (16.0 * (1.0 - std::cosh(width)) * wall);
    const double term2 = std::exp(-2.5 * lo - 2.0 * hi) * (1.0 + std::exp(lo)) * common *
                         csch_half * csch_half * csch_half / std::cosh(0.5 * hi) *
                         std::sinh(lo) / (32.0 * wall);
    return term1 + term2;
}

double default_probe_eps(const Problem& problem) {
    return 1e-2 * problem.payoffs.delta();
}

namespace {

ComplexityRanking rank_by_delta(std::vector<RankedProblem> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankedProblem& x, const RankedProblem& y) {
                         return x.delta > y.delta;
                     });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<int>(i) + 1;
        entries[i].separation_significant = true;
        if (i + 1 < entries.size()) {
            const double gap = entries[i].delta - entries[i + 1].delta;
            const double se = std::hypot(entries[i].std_err, entries[i + 1].std_err);
            entries[i].separation_significant = gap > 2.0 * se && gap > 0.0;
        }
    }
    return {std::move(entries)};
}

} // namespace

ComplexityRanking rank_problems(const std::vector<std::pair<std::string, Problem>>& problems,
                                double eps) {
    if (!(eps >= 0.0)) throw DomainError(fmt::format("eps must be nonnegative, got {}", eps));
    std::vector<RankedProblem> entries;
    entries.reserve(problems.size());
    for (const auto& [id, problem] : problems) {
        const double baseline = choice_share_b(canonicalize(problem));
        if (baseline <= 0.0 || baseline >= 1.0)
            throw DegenerateShare(fmt::format(
                "problem '{}' has baseline share {}; ranking needs interior shares", id, baseline));
        const double shifted =
            choice_share_b(canonicalize(apply_bonus(problem, Alternative::b, eps)));
        entries.push_back({id, shifted - baseline, 0.0, 0, false});
    }
    return rank_by_delta(std::move(entries));
}

ComplexityRanking rank_from_data(const std::vector<ShareObservation>& shares) {
    std::vector<RankedProblem> entries;
    entries.reserve(shares.size());
    for (const ShareObservation& obs : shares) {
        for (double s : {obs.baseline_share_b, obs.shifted_share_b})
            if (!(s >= 0.0 && s <= 1.0))
                throw InvalidShare(fmt::format("problem '{}' has share {} outside [0,1]",
                                               obs.id, s));
        if (obs.n_obs < 1)
            throw InvalidShare(fmt::format("problem '{}' needs n_obs >= 1, got {}", obs.id,
                                           obs.n_obs));
        const double n = static_cast<double>(obs.n_obs);
        const double se_base = std::sqrt(obs.baseline_share_b * (1.0 - obs.baseline_share_b) / n);
        const double se_shift = std::sqrt(obs.shifted_share_b * (1.0 - obs.shifted_share_b) / n);
        entries.push_back({obs.id, obs.shifted_share_b - obs.baseline_share_b,
                           std::hypot(se_base, se_shift), 0, false});
    }
    return rank_by_delta(std::move(entries));
}

} // namespace wald
