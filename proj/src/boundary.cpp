#include "wald/boundary.hpp"

#include "wald/rootfind.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace wald {

namespace {

constexpr double kResidualTarget = 1e-10;
constexpr int kMaxOuterIterations = 200;

// d/dl of the cost kernel.
double dg(double ell) { return 2.0 * std::cosh(ell) + 2.0; }

// Indifference kernel: l + e^l - E*(l - e^-l), E = exp(ell_tilde).
// Strictly decreasing below log(E), increasing above.
double hker(double ell, double E) {
    return ell + std::exp(ell) - E * (ell - std::exp(-ell));
}

double dhker(double ell, double E) {
    return 1.0 + std::exp(ell) - E * (1.0 + std::exp(-ell));
}

// Lower threshold implied by the cost equation at upper threshold ell_hi:
// solves g(x) = g(ell_hi) - K. Increasing in ell_hi.
double lower_from_cost(double ell_hi, double K) {
    const double target = detail::cost_kernel(ell_hi) - K;
    double lo = ell_hi - 1.0, step = 1.0;
    while (detail::cost_kernel(lo) > target) {
        step *= 2.0;
        lo = ell_hi - step;
    }
    return bisect([&](double x) { return detail::cost_kernel(x) - target; }, lo, ell_hi);
}

// Lower threshold implied by the indifference equation: the branch of
// h(x) = h(ell_hi) with x <= ell_tilde. Decreasing in ell_hi.
double lower_from_indifference(double ell_hi, double ell_tilde, double E) {
    if (ell_hi <= ell_tilde) return ell_tilde;
    const double target = hker(ell_hi, E);
    double lo = ell_tilde - 1.0, step = 1.0;
    while (hker(lo, E) < target) {
        step *= 2.0;
        lo = ell_tilde - step;
    }
    return bisect([&](double x) { return target - hker(x, E); }, lo, ell_tilde);
}

} // namespace

namespace detail {
double cost_kernel(double ell) { return 2.0 * std::sinh(ell) + 2.0 * ell; }
} // namespace detail

std::pair<double, double> residuals(const Boundaries& b, const CanonicalProblem& cp) {
    const double K = cp.k * cp.k / cp.c_tilde;
    const double E = std::exp(cp.ell_tilde);
    const double r1 = (detail::cost_kernel(b.ell_hi) - detail::cost_kernel(b.ell_lo)) - K;
    const double r2 = hker(b.ell_hi, E) - hker(b.ell_lo, E);
    return {r1, r2};
}

Boundaries solve_boundaries(const CanonicalProblem& cp) {
    if (!(cp.k > 0.0) || !(cp.c_tilde > 0.0) || !std::isfinite(cp.ell_tilde))
        throw DomainError(fmt::format("invalid canonical problem: k={} c_tilde={} ell_tilde={}",
                                      cp.k, cp.c_tilde, cp.ell_tilde));

    // The system is symmetric under (lt, lo, hi) -> (-lt, -hi, -lo); solve the
    // lt >= 0 half-plane and mirror back.
    if (cp.ell_tilde < 0.0) {
        const CanonicalProblem mirrored{cp.k, cp.c_tilde, -cp.ell_tilde};
        Boundaries m = solve_boundaries(mirrored);
        Boundaries b{-m.ell_hi, -m.ell_lo, 0.0, 0.0, false};
        auto [r1, r2] = residuals(b, cp);
        b.residual_1 = std::abs(r1);
        b.residual_2 = std::abs(r2);
        b.immediate_stop = !(b.ell_lo < 0.0 && 0.0 < b.ell_hi);
        return b;
    }

    const double K = cp.k * cp.k / cp.c_tilde;
    const double lt = cp.ell_tilde;
    const double E = std::exp(lt);

    // The two implicit branches cross exactly once: lower_from_cost is
    // increasing in ell_hi, lower_from_indifference decreasing, and at
    // ell_hi = lt the first lies strictly below the second.
    const auto branch_gap = [&](double ell_hi) {
        return lower_from_cost(ell_hi, K) - lower_from_indifference(ell_hi, lt, E);
    };

    double bracket_lo = lt;
    double bracket_hi = std::max(2.0 * lt, 50.0);
    int doublings = 0;
    while (branch_gap(bracket_hi) < 0.0) {
        bracket_hi *= 2.0;
        if (++doublings > 8 || !std::isfinite(detail::cost_kernel(bracket_hi)))
            throw ConvergenceFailure(fmt::format(
                "boundary bracket expansion failed: K={} ell_tilde={} reached ell_hi={} "
                "after {} doublings",
                K, lt, bracket_hi, doublings));
    }

    double hi = bisect(branch_gap, bracket_lo, bracket_hi);
    double lo = lower_from_indifference(hi, lt, E);

    // Newton polish on the full 2x2 system; the bisection estimate is close
    // enough that a handful of undamped steps reaches the noise floor.
    double best_lo = lo, best_hi = hi;
    double best_norm = std::numeric_limits<double>::infinity();
    int newton_iters = 0;
    for (; newton_iters < kMaxOuterIterations; ++newton_iters) {
        const double r1 = (detail::cost_kernel(hi) - detail::cost_kernel(lo)) - K;
        const double r2 = hker(hi, E) - hker(lo, E);
        const double norm = std::max(std::abs(r1), std::abs(r2));
        if (norm < best_norm) {
            best_norm = norm;
            best_lo = lo;
            best_hi = hi;
        }
        if (norm < 1e-13 || newton_iters > 20) break;
        const double j11 = -dg(lo), j12 = dg(hi);
        const double j21 = -dhker(lo, E), j22 = dhker(hi, E);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dlo = (-r1 * j22 + r2 * j12) / det;
        const double dhi = (-j11 * r2 + j21 * r1) / det;
        lo += dlo;
        hi += dhi;
        if (!(lo <= lt) || !(hi >= lt)) { // stepped out of the admissible wedge
            lo = best_lo;
            hi = best_hi;
            break;
        }
    }

    Boundaries b{best_lo, best_hi, 0.0, 0.0, false};
    auto [r1, r2] = residuals(b, cp);
    b.residual_1 = std::abs(r1);
    b.residual_2 = std::abs(r2);
    b.immediate_stop = !(b.ell_lo < 0.0 && 0.0 < b.ell_hi);

    // The residual noise floor scales with the magnitude of the kernels, so
    // very wide boundaries (huge K) cannot hit a fixed absolute target.
    const double kernel_scale =
        std::max({1.0, K, std::abs(detail::cost_kernel(b.ell_hi)),
                  std::abs(hker(b.ell_hi, E)), std::abs(hker(b.ell_lo, E))});
    const double tolerance =
        std::max(kResidualTarget, 100.0 * std::numeric_limits<double>::epsilon() * kernel_scale);
    if (b.residual_1 > tolerance || b.residual_2 > tolerance)
        throw ConvergenceFailure(fmt::format(
            "boundary solver missed residual target: |r1|={} |r2|={} after outer bisection "
            "on [{}, {}] and {} Newton iterations (k={}, c_tilde={}, ell_tilde={})",
            b.residual_1, b.residual_2, bracket_lo, bracket_hi, newton_iters, cp.k,
            cp.c_tilde, cp.ell_tilde));
    return b;
}

ValueCoefficients value_coefficients(const Boundaries& b, const CanonicalProblem& cp) {
    const double scale = cp.c_tilde / (cp.k * cp.k);
    const double lo = b.ell_lo;
    return {
        .beta0 = -scale * ((1.0 - std::exp(lo)) - lo),
        .beta1 = -scale * detail::cost_kernel(lo),
    };
}

double value_a(double p, const Boundaries& b, const CanonicalProblem& cp) {
    const double ell = log_odds(p);
    const double p_tilde = belief_from_log_odds(cp.ell_tilde);
    if (ell <= b.ell_lo || ell >= b.ell_hi) return std::max(p - p_tilde, 0.0);
    const auto [beta0, beta1] = value_coefficients(b, cp);
    const double scale = cp.c_tilde / (cp.k * cp.k);
    // (e^l - 1)/(e^l + 1) = tanh(l/2); e^l/(e^l + 1) is the logistic function.
    return scale * std::tanh(0.5 * ell) * ell + belief_from_log_odds(ell) * beta1 + beta0;
}

double value_a_slope(double p, const Boundaries& b, const CanonicalProblem& cp) {
    const double ell = log_odds(p);
    // Belief -> log-odds round trips drift by a few ulps, so points that are
    // the image of a threshold must still evaluate the interior branch.
    const double edge_tol = 1e-9 * std::max(1.0, std::abs(ell));
    if (ell < b.ell_lo - edge_tol || ell > b.ell_hi + edge_tol) {
        const double p_tilde = belief_from_log_odds(cp.ell_tilde);
        return p > p_tilde ? 1.0 : 0.0;
    }
    const auto [beta0, beta1] = value_coefficients(b, cp);
    const double scale = cp.c_tilde / (cp.k * cp.k);
    const double sech_half = 1.0 / std::cosh(0.5 * ell);
    // Chain rule through p = logistic(ell): dp/dell = p(1-p).
    const double dp_dell = p * (1.0 - p);
    const double dv_dell =
        scale * (std::tanh(0.5 * ell) + 0.5 * ell * sech_half * sech_half) + dp_dell * beta1;
    return dv_dell / dp_dell;
}

} // namespace wald
