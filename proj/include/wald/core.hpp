#pragma once

#include "wald/errors.hpp"

namespace wald {

enum class Alternative { a, b };

/// Payoffs u(alternative, state) of the binary choice problem.
/// Row is the chosen alternative, column the state: u_ab = u(a, b).
struct PayoffMatrix {
    double u_aa;
    double u_ab;
    double u_ba;
    double u_bb;

    /// Stakes: sum of the two state-wise payoff gaps. Positive for valid matrices.
    double delta() const { return (u_aa - u_ba) + (u_bb - u_ab); }

    /// Throws InvalidPayoffs if either alternative is weakly dominant.
    void validate() const;
};

/// Identity payoffs: u(alt, state) = 1 when they match, 0 otherwise.
inline PayoffMatrix identity_payoffs() { return {1.0, 0.0, 0.0, 1.0}; }

/// A sequential-sampling problem: payoffs, signal process, and flow cost.
/// The prior is fixed at 1/2 throughout the library.
struct Problem {
    PayoffMatrix payoffs;
    double mu;    ///< drift per unit time, > 0
    double sigma; ///< volatility scale, > 0
    double c;     ///< flow cost, payoff units per unit time, > 0

    void validate() const;
};

/// Normalized primitives: everything the boundary solver needs.
struct CanonicalProblem {
    double k;         ///< signal-to-noise ratio mu/sigma
    double c_tilde;   ///< flow cost normalized by stakes, c/(2*delta)
    double ell_tilde; ///< log-odds of the indifference belief
};

/// ln(p/(1-p)). Throws DomainError unless p in (0,1).
double log_odds(double p);

/// Inverse of log_odds; maps any real to (0,1).
double belief_from_log_odds(double ell);

/// Belief at which both alternatives yield equal expected payoff.
double indifference_point(const PayoffMatrix& payoffs);

CanonicalProblem canonicalize(const Problem& problem);

/// Adds eps to both payoffs of the chosen alternative. Stakes are unchanged;
/// the indifference point shifts by eps/delta toward the other alternative.
Problem apply_bonus(Problem problem, Alternative alternative, double eps);

} // namespace wald
