#pragma once

#include "wald/boundary.hpp"
#include "wald/core.hpp"
#include "wald/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wald {

/// Identifier of the per-path RNG scheme, recorded in output metadata.
/// Stream derivation: splitmix64 state = mix(mix(seed) + path_index);
/// normals via Box-Muller from 53-bit uniforms.
inline constexpr const char* kGeneratorId = "splitmix64-boxmuller-v1";

struct SimConfig {
    std::int64_t n_paths = 100'000;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    int workers = 1;
    std::int64_t path_cap = 50'000'000; ///< max n_paths accepted

    void validate() const;
};

struct PathOutcome {
    bool chose_a;
    double stop_time; ///< multiple of dt
    bool state_was_a;
};

/// Simulates one path. The RNG stream depends only on (seed, path_index),
/// never on worker identity, so aggregates are worker-count invariant.
PathOutcome simulate_path(const CanonicalProblem& cp, const Boundaries& b,
                          std::uint64_t seed, std::int64_t path_index, double dt);

/// Euler-Maruyama estimate of accuracy, mean stopping time, and choice share.
/// Deterministic for fixed (seed, n_paths, dt) at any worker count.
/// Degenerate boundaries return the exact stopped-at-prior statistics.
StopStats simulate(const Problem& problem, const Boundaries& b, const SimConfig& cfg);

struct ValueEstimate {
    double value;
    double std_err;
};

/// MC estimate of the objective E[v(p_tau) - c*tau] under threshold policy b,
/// in the problem's payoff units.
ValueEstimate estimate_policy_value(const Problem& problem, const Boundaries& b,
                                    const SimConfig& cfg);

/// Sample of at most max_count stop times (path indices 0..), for histograms.
std::vector<double> sample_stop_times(const Problem& problem, const Boundaries& b,
                                      const SimConfig& cfg, std::size_t max_count);

} // namespace wald
