#include "wald/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <thread>
#include <vector>

namespace wald {

namespace {

// Fixed chunk size so the chunk partition (and hence the reduction order)
// never depends on the worker count.
constexpr std::int64_t kChunk = 8192;
constexpr std::int64_t kMaxStepsPerPath = 1'000'000'000;

std::uint64_t splitmix64_step(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct PathRng {
    std::uint64_t state;

    PathRng(std::uint64_t seed, std::int64_t path_index) {
        std::uint64_t s = seed;
        splitmix64_step(s);
        state = s + static_cast<std::uint64_t>(path_index);
        splitmix64_step(state);
    }

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(splitmix64_step(state) >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Per-chunk aggregates; combined sequentially in chunk order.
struct ChunkSums {
    double n_correct = 0.0;
    double n_choose_a = 0.0;
    KahanSum time;
    KahanSum time_sq;
    KahanSum value;
    KahanSum value_sq;
};

bool degenerate_boundaries(const Boundaries& b) {
    return !(b.ell_lo < 0.0 && 0.0 < b.ell_hi);
}

PathOutcome run_path(const CanonicalProblem& cp, const Boundaries& b, std::uint64_t seed,
                     std::int64_t path_index, double dt) {
    PathRng rng(seed, path_index);
    const bool state_was_a = rng.uniform() < 0.5;
    const double s = state_was_a ? 1.0 : -1.0;
    // Log-odds process: ell = 2(mu/sigma^2) X, so
    // d ell = 2 k^2 s dt + 2 k sqrt(dt) dW.
    const double drift = 2.0 * cp.k * cp.k * s * dt;
    const double vol = 2.0 * cp.k * std::sqrt(dt);
    double ell = 0.0;
    std::int64_t steps = 0;
    while (ell > b.ell_lo && ell < b.ell_hi) {
        ell += drift + vol * rng.normal();
        if (++steps > kMaxStepsPerPath)
            throw ResourceError(fmt::format("path {} exceeded {} steps", path_index,
                                            kMaxStepsPerPath));
    }
    return {
        .chose_a = ell >= b.ell_hi,
        .stop_time = static_cast<double>(steps) * dt,
        .state_was_a = state_was_a,
    };
}

template <class PerPath>
void run_chunks(const SimConfig& cfg, std::vector<ChunkSums>& chunks, PerPath&& per_path) {
    const std::int64_t n_chunks = static_cast<std::int64_t>(chunks.size());
    const int workers = std::max(1, cfg.workers);
    std::atomic<std::int64_t> next_chunk{0};
    auto work = [&] {
        for (;;) {
            const std::int64_t ci = next_chunk.fetch_add(1);
            if (ci >= n_chunks) return;
            const std::int64_t begin = ci * kChunk;
            const std::int64_t end = std::min(begin + kChunk, cfg.n_paths);
            for (std::int64_t p = begin; p < end; ++p) per_path(chunks[ci], p);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
}

} // namespace

void SimConfig::validate() const {
    if (n_paths < 1) throw ValidationError(fmt::format("n_paths must be >= 1, got {}", n_paths));
    if (!(dt > 0.0)) throw ValidationError(fmt::format("dt must be positive, got {}", dt));
    if (workers < 1) throw ValidationError(fmt::format("workers must be >= 1, got {}", workers));
    if (n_paths > path_cap)
        throw ResourceError(fmt::format("n_paths={} exceeds configured cap {}", n_paths, path_cap));
}

PathOutcome simulate_path(const CanonicalProblem& cp, const Boundaries& b, std::uint64_t seed,
                          std::int64_t path_index, double dt) {
    return run_path(cp, b, seed, path_index, dt);
}

StopStats simulate(const Problem& problem, const Boundaries& b, const SimConfig& cfg) {
    cfg.validate();
    const CanonicalProblem cp = canonicalize(problem);
    if (degenerate_boundaries(b))
        return {.accuracy = 0.5,
                .expected_time = 0.0,
                .prob_choose_a = b.ell_hi <= 0.0 ? 1.0 : (b.ell_lo >= 0.0 ? 0.0 : 0.5),
                .source = StatsSource::monte_carlo};

    const std::int64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(static_cast<std::size_t>(n_chunks));
    run_chunks(cfg, chunks, [&](ChunkSums& cs, std::int64_t p) {
        const PathOutcome out = run_path(cp, b, cfg.seed, p, cfg.dt);
        if (out.chose_a == out.state_was_a) cs.n_correct += 1.0;
        if (out.chose_a) cs.n_choose_a += 1.0;
        cs.time.add(out.stop_time);
        cs.time_sq.add(out.stop_time * out.stop_time);
    });

    KahanSum correct, choose_a, time, time_sq;
    for (const ChunkSums& cs : chunks) {
        correct.add(cs.n_correct);
        choose_a.add(cs.n_choose_a);
        time.add(cs.time.sum);
        time_sq.add(cs.time_sq.sum);
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double acc = correct.sum / n;
    const double share_a = choose_a.sum / n;
    const double mean_t = time.sum / n;
    const double var_t = std::max(0.0, time_sq.sum / n - mean_t * mean_t);
    return {
        .accuracy = acc,
        .expected_time = mean_t,
        .prob_choose_a = share_a,
        .source = StatsSource::monte_carlo,
        .accuracy_se = std::sqrt(std::max(0.0, acc * (1.0 - acc)) / n),
        .time_se = std::sqrt(var_t / n),
        .choice_se = std::sqrt(std::max(0.0, share_a * (1.0 - share_a)) / n),
    };
}

ValueEstimate estimate_policy_value(const Problem& problem, const Boundaries& b,
                                    const SimConfig& cfg) {
    cfg.validate();
    const CanonicalProblem cp = canonicalize(problem);
    const PayoffMatrix& u = problem.payoffs;
    const auto best_payoff = [&](double p) {
        const double ua = p * u.u_aa + (1.0 - p) * u.u_ab;
        const double ub = p * u.u_ba + (1.0 - p) * u.u_bb;
        return std::max(ua, ub);
    };
    if (degenerate_boundaries(b)) return {best_payoff(0.5), 0.0};

    const std::int64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(static_cast<std::size_t>(n_chunks));
    run_chunks(cfg, chunks, [&](ChunkSums& cs, std::int64_t p) {
        const PathOutcome out = run_path(cp, b, cfg.seed, p, cfg.dt);
        const double p_stop = belief_from_log_odds(out.chose_a ? b.ell_hi : b.ell_lo);
        const double v = best_payoff(p_stop) - problem.c * out.stop_time;
        cs.value.add(v);
        cs.value_sq.add(v * v);
    });

    KahanSum value, value_sq;
    for (const ChunkSums& cs : chunks) {
        value.add(cs.value.sum);
        value_sq.add(cs.value_sq.sum);
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double mean = value.sum / n;
    const double var = std::max(0.0, value_sq.sum / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

std::vector<double> sample_stop_times(const Problem& problem, const Boundaries& b,
                                      const SimConfig& cfg, std::size_t max_count) {
    cfg.validate();
    const CanonicalProblem cp = canonicalize(problem);
    std::vector<double> times;
    if (degenerate_boundaries(b)) return times;
    const std::size_t count =
        std::min<std::size_t>(max_count, static_cast<std::size_t>(cfg.n_paths));
    times.reserve(count);
    for (std::size_t p = 0; p < count; ++p)
        times.push_back(run_path(cp, b, cfg.seed, static_cast<std::int64_t>(p), cfg.dt).stop_time);
    return times;
}

} // namespace wald
