#include "wald/info_cost.hpp"

#include "wald/rootfind.hpp"

#include <cmath>
#include <numbers>

namespace wald {

namespace {
// Evaluation edge inside (1/2, 1) for costs whose derivative blows up at 1.
constexpr double kUpperEdge = 1.0 - 1e-12;
} // namespace

PosteriorCost PosteriorCost::entropy() {
    return {
        .c = [](double p) {
            const double q = 1.0 - p;
            const double hp = p > 0.0 ? p * std::log(p) : 0.0;
            const double hq = q > 0.0 ? q * std::log(q) : 0.0;
            return hp + hq + std::numbers::ln2;
        },
        .dc = [](double p) { return std::log(p / (1.0 - p)); },
        .name = "entropy",
    };
}

PosteriorCost PosteriorCost::quadratic() {
    return {
        .c = [](double p) { return (p - 0.5) * (p - 0.5); },
        .dc = [](double p) { return 2.0 * (p - 0.5); },
        .name = "quadratic",
    };
}

double optimal_posterior(double kappa, const PosteriorCost& cost) {
    if (!(kappa > 0.0)) return 1.0; // free information: fully revealing corner
    // First-order condition kappa c'(p) = 2; c' is increasing on (1/2, 1).
    if (kappa * cost.dc(kUpperEdge) < 2.0) return 1.0;
    if (kappa * cost.dc(0.5 + 1e-15) >= 2.0) return 0.5;
    return bisect([&](double p) { return kappa * cost.dc(p) - 2.0; }, 0.5 + 1e-15, kUpperEdge);
}

std::vector<KappaCurvePoint> expected_time_curve(std::span<const double> kappa_grid,
                                                 const PosteriorCost& cost) {
    std::vector<KappaCurvePoint> points;
    points.reserve(kappa_grid.size());
    for (double kappa : kappa_grid) {
        const double p = optimal_posterior(kappa, cost);
        const double c = cost.c(p);
        points.push_back({kappa, p, c, kappa * c});
    }
    return points;
}

bool single_peaked_iff(const PosteriorCost& cost, std::span<const double> grid) {
    // Quasiconcavity of c/c' on the grid: the successive differences may not
    // turn positive again after turning negative.
    constexpr double kZero = 1e-12;
    double prev = 0.0;
    bool have_prev = false;
    bool falling = false;
    for (double p : grid) {
        const double ratio = cost.c(p) / cost.dc(p);
        if (have_prev) {
            const double diff = ratio - prev;
            if (diff < -kZero) falling = true;
            else if (diff > kZero && falling) return false;
        }
        prev = ratio;
        have_prev = true;
    }
    return true;
}

double brute_force_posterior(double kappa, const PosteriorCost& cost, std::size_t resolution) {
    // Grid argmax of the symmetric binary objective 2(p - 1/2) - kappa c(p).
    double best_p = 0.5;
    double best_v = -kappa * cost.c(0.5);
    for (std::size_t i = 1; i <= resolution; ++i) {
        const double p = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(resolution);
        const double v = 2.0 * (p - 0.5) - kappa * cost.c(p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    return best_p;
}

} // namespace wald
