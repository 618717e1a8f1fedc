#pragma once

#include "wald/boundary.hpp"
#include "wald/core.hpp"

#include <vector>

namespace wald {

enum class StatsSource { closed_form, monte_carlo };

/// Speed/accuracy statistics of a threshold stopping policy.
struct StopStats {
    double accuracy;      ///< P(chosen alternative matches the state)
    double expected_time; ///< E[stopping time]
    double prob_choose_a;
    StatsSource source = StatsSource::closed_form;
    // Standard errors; zero for closed-form results.
    double accuracy_se = 0.0;
    double time_se = 0.0;
    double choice_se = 0.0;
};

/// P(correct choice) for a process started at log-odds 0.
/// Degenerate boundaries (both zero) give the limit 1/2.
/// Throws DomainError if 0 is outside [ell_lo, ell_hi].
double accuracy(const Boundaries& b);

/// Expected stopping time from log-odds 0; zero on immediate stop.
double expected_stop_time(const Boundaries& b, double k);

/// Probability the upper boundary is hit first (alternative a chosen).
double prob_choose_a(const Boundaries& b);

/// All three closed forms in one call.
StopStats closed_form_stats(const Boundaries& b, double k);

struct SweepRow {
    double k;
    double ell_lo;
    double ell_hi;
    double p_lo;
    double p_hi;
    double accuracy;
    double expected_time;
};

/// Re-solves the boundaries at each k with (c_tilde, ell_tilde) held fixed.
/// Immediate-stop rows report accuracy 1/2 and time 0.
std::vector<SweepRow> sweep(const Problem& problem, const std::vector<double>& k_grid);

/// Golden-section maximizer of expected stopping time over k.
/// Requires an interior maximum inside [k_min, k_max] (throws BracketError
/// otherwise); the final bracket is below 1e-8.
double find_peak_complexity(const Problem& problem, double k_min, double k_max);

/// Same search on canonical primitives; used internally and by the effort module.
double find_peak_complexity(double c_tilde, double ell_tilde, double k_min, double k_max);

} // namespace wald
