// Command-line front end: solves, sweeps, simulates, and ranks sequential
// sampling problems, emitting plot-ready CSV or JSON.

#include "wald/boundary.hpp"
#include "wald/core.hpp"
#include "wald/csv.hpp"
#include "wald/discounting.hpp"
#include "wald/effort.hpp"
#include "wald/info_cost.hpp"
#include "wald/mc.hpp"
#include "wald/probe.hpp"
#include "wald/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using wald::csv::format_double;

struct ProblemOptions {
    double u_aa = 1.0, u_ab = 0.0, u_ba = 0.0, u_bb = 1.0;
    std::optional<double> delta;
    std::optional<double> p_tilde;
    double mu = 1.0;
    double sigma = 1.0;
    double flow_cost = 1.0;

    wald::Problem build() const {
        wald::PayoffMatrix payoffs{u_aa, u_ab, u_ba, u_bb};
        if (delta.has_value() != p_tilde.has_value())
            throw wald::ValidationError("--delta and --ptilde must be given together");
        if (delta) {
            if (!(*delta > 0.0) || !(*p_tilde > 0.0 && *p_tilde < 1.0))
                throw wald::ValidationError("need delta > 0 and ptilde in (0,1)");
            payoffs = {*delta * (1.0 - *p_tilde), 0.0, 0.0, *delta * *p_tilde};
        }
        wald::Problem problem{payoffs, mu, sigma, flow_cost};
        try {
            problem.validate();
        } catch (const wald::Error& e) {
            throw wald::ValidationError(e.what());
        }
        return problem;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--uaa", u_aa, "Payoff u(a,a)")->capture_default_str();
        cmd->add_option("--uab", u_ab, "Payoff u(a,b)")->capture_default_str();
        cmd->add_option("--uba", u_ba, "Payoff u(b,a)")->capture_default_str();
        cmd->add_option("--ubb", u_bb, "Payoff u(b,b)")->capture_default_str();
        cmd->add_option("--delta", delta, "Stakes (alternative to a payoff matrix)");
        cmd->add_option("--ptilde", p_tilde, "Indifference belief (with --delta)");
        cmd->add_option("--mu", mu, "Drift per unit time")->capture_default_str();
        cmd->add_option("--sigma", sigma, "Volatility scale")->capture_default_str();
        cmd->add_option("--flow-cost", flow_cost, "Flow cost per unit time")
            ->capture_default_str();
    }
};

struct GridSpec {
    double min = 0.0, max = 0.0;
    std::size_t points = 0;
    bool log_spaced = false;

    std::vector<double> values() const {
        if (points == 0) throw wald::ValidationError("empty grid");
        if (!(min > 0.0) || !(max >= min) || (points > 1 && !(max > min)))
            throw wald::ValidationError("grid needs 0 < min < max (min == max only for N=1)");
        std::vector<double> v(points);
        if (points == 1) {
            v[0] = min;
            return v;
        }
        for (std::size_t i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(points - 1);
            v[i] = log_spaced ? min * std::pow(max / min, t) : min + t * (max - min);
        }
        return v;
    }
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 4)
        throw wald::ValidationError("grid must be MIN:MAX:N:{log|lin}, got '" + text + "'");
    g.min = wald::csv::parse_double(parts[0]);
    g.max = wald::csv::parse_double(parts[1]);
    const double n = wald::csv::parse_double(parts[2]);
    if (!(n >= 1.0) || n != std::floor(n))
        throw wald::ValidationError("grid point count must be a positive integer");
    g.points = static_cast<std::size_t>(n);
    if (parts[3] == "log") g.log_spaced = true;
    else if (parts[3] == "lin") g.log_spaced = false;
    else throw wald::ValidationError("grid spacing must be 'log' or 'lin'");
    return g;
}

struct OutputOptions {
    std::string out_path; // empty = stdout
    std::string format = "csv";
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out_path, "Output file (default: stdout)");
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_flag("--quiet", quiet, "Suppress progress notes on stderr");
    }

    void emit(const wald::csv::Table& table, const std::vector<std::string>& comments) const {
        std::ostringstream body;
        if (format == "csv") {
            body << "# schema_version=" << wald::csv::kSchemaVersion << "\n";
            for (const auto& c : comments) body << "# " << c << "\n";
            for (std::size_t i = 0; i < table.header.size(); ++i)
                body << table.header[i] << (i + 1 < table.header.size() ? "," : "\n");
            for (const auto& row : table.rows)
                for (std::size_t i = 0; i < row.size(); ++i)
                    body << row[i] << (i + 1 < row.size() ? "," : "\n");
        } else {
            json meta = json::object();
            for (const auto& c : comments) {
                const auto eq = c.find('=');
                if (eq != std::string::npos) meta[c.substr(0, eq)] = c.substr(eq + 1);
            }
            json rows = json::array();
            for (const auto& row : table.rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < row.size(); ++i) {
                    // Numeric columns stay numeric in JSON.
                    try {
                        obj[table.header[i]] = wald::csv::parse_double(row[i]);
                    } catch (const wald::ValidationError&) {
                        obj[table.header[i]] = row[i];
                    }
                }
                rows.push_back(std::move(obj));
            }
            json doc{{"schema_version", wald::csv::kSchemaVersion},
                     {"metadata", std::move(meta)},
                     {"rows", std::move(rows)}};
            body << doc.dump(2) << "\n";
        }
        if (out_path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw wald::ValidationError("cannot open output file '" + out_path + "'");
            out << body.str();
        }
    }
};

int worker_cap() {
    if (const char* env = std::getenv("WALD_LAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return 1 << 16;
}

wald::CostSpec parse_effort_cost(const std::string& text) {
    const std::string prefix = "quadratic_fixed:";
    if (text.rfind(prefix, 0) != 0)
        throw wald::ValidationError("effort cost must be 'quadratic_fixed:a,b', got '" + text +
                                    "'");
    const auto comma = text.find(',', prefix.size());
    if (comma == std::string::npos)
        throw wald::ValidationError("effort cost must be 'quadratic_fixed:a,b'");
    const double a = wald::csv::parse_double(
        std::string_view(text).substr(prefix.size(), comma - prefix.size()));
    const double b = wald::csv::parse_double(std::string_view(text).substr(comma + 1));
    return wald::CostSpec::quadratic_fixed(a, b);
}

// Piecewise-linear cost from a CSV of (p, c, c').
wald::PosteriorCost tabulated_cost(const std::string& path) {
    const wald::csv::Table t = wald::csv::read_file(path);
    const std::size_t ip = t.column("p"), ic = t.column("c"), id = t.column("dc");
    std::vector<double> ps, cs, ds;
    for (const auto& row : t.rows) {
        ps.push_back(wald::csv::parse_double(row[ip]));
        cs.push_back(wald::csv::parse_double(row[ic]));
        ds.push_back(wald::csv::parse_double(row[id]));
    }
    if (ps.size() < 2) throw wald::ValidationError("tabulated cost needs at least 2 rows");
    for (std::size_t i = 1; i < ps.size(); ++i)
        if (!(ps[i] > ps[i - 1]))
            throw wald::ValidationError("tabulated cost: p column must be strictly ascending");
    auto interp = [](std::vector<double> xs, std::vector<double> ys) {
        return [xs = std::move(xs), ys = std::move(ys)](double x) {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t j = std::clamp<std::size_t>(
                static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
            const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            return ys[j - 1] + t * (ys[j] - ys[j - 1]);
        };
    };
    return {.c = interp(ps, cs), .dc = interp(ps, ds), .name = "tabulated:" + path};
}

wald::PosteriorCost parse_posterior_cost(const std::string& text) {
    if (text == "entropy") return wald::PosteriorCost::entropy();
    if (text == "quadratic") return wald::PosteriorCost::quadratic();
    const std::string prefix = "tab:";
    if (text.rfind(prefix, 0) == 0) return tabulated_cost(text.substr(prefix.size()));
    throw wald::ValidationError("cost must be 'entropy', 'quadratic', or 'tab:PATH'");
}

void run_solve(const ProblemOptions& popt, const OutputOptions& oopt) {
    const wald::Problem problem = popt.build();
    const wald::CanonicalProblem cp = wald::canonicalize(problem);
    const wald::Boundaries b = wald::solve_boundaries(cp);
    wald::StopStats stats{0.5, 0.0, 0.5};
    if (!b.immediate_stop) stats = wald::closed_form_stats(b, cp.k);

    wald::csv::Table t;
    t.header = {"k",        "c_tilde",  "ell_tilde",  "ell_lo",        "ell_hi",
                "p_lo",     "p_hi",     "residual_1", "residual_2",    "immediate_stop",
                "accuracy", "expected_time", "prob_choose_a"};
    t.rows.push_back({format_double(cp.k), format_double(cp.c_tilde),
                      format_double(cp.ell_tilde), format_double(b.ell_lo),
                      format_double(b.ell_hi), format_double(wald::belief_from_log_odds(b.ell_lo)),
                      format_double(wald::belief_from_log_odds(b.ell_hi)),
                      format_double(b.residual_1), format_double(b.residual_2),
                      b.immediate_stop ? "1" : "0", format_double(stats.accuracy),
                      format_double(stats.expected_time), format_double(stats.prob_choose_a)});
    oopt.emit(t, {});
}

void run_sweep(const ProblemOptions& popt, const std::string& grid_text,
               const OutputOptions& oopt) {
    if (grid_text.empty()) throw wald::ValidationError("sweep requires --grid MIN:MAX:N:{log|lin}");
    const wald::Problem problem = popt.build();
    const auto rows = wald::sweep(problem, parse_grid(grid_text).values());
    wald::csv::Table t;
    t.header = {"k", "ell_lo", "ell_hi", "p_lo", "p_hi", "accuracy", "expected_time"};
    for (const auto& r : rows)
        t.rows.push_back({format_double(r.k), format_double(r.ell_lo), format_double(r.ell_hi),
                          format_double(r.p_lo), format_double(r.p_hi),
                          format_double(r.accuracy), format_double(r.expected_time)});
    oopt.emit(t, {});
}

void run_simulate(const ProblemOptions& popt, const wald::SimConfig& cfg,
                  const OutputOptions& oopt) {
    const wald::Problem problem = popt.build();
    const wald::CanonicalProblem cp = wald::canonicalize(problem);
    const wald::Boundaries b = wald::solve_boundaries(cp);
    wald::StopStats closed{0.5, 0.0, 0.5};
    if (!b.immediate_stop) closed = wald::closed_form_stats(b, cp.k);
    const wald::StopStats mc = wald::simulate(problem, b, cfg);

    wald::csv::Table t;
    t.header = {"metric", "closed_form", "monte_carlo", "std_err"};
    t.rows.push_back({"accuracy", format_double(closed.accuracy), format_double(mc.accuracy),
                      format_double(mc.accuracy_se)});
    t.rows.push_back({"expected_time", format_double(closed.expected_time),
                      format_double(mc.expected_time), format_double(mc.time_se)});
    t.rows.push_back({"prob_choose_a", format_double(closed.prob_choose_a),
                      format_double(mc.prob_choose_a), format_double(mc.choice_se)});
    // Metadata for replay; deliberately excludes the worker count, which does
    // not affect the estimates.
    oopt.emit(t, {"seed=" + std::to_string(cfg.seed), "dt=" + format_double(cfg.dt),
                  "n_paths=" + std::to_string(cfg.n_paths),
                  std::string("generator=") + wald::kGeneratorId});
}

void run_effort(const ProblemOptions& popt, const std::string& cost_text, double lambda_lo,
                double lambda_hi, const std::string& grid_text, const OutputOptions& oopt) {
    const wald::Problem problem = popt.build();
    const wald::CostSpec cost = parse_effort_cost(cost_text);
    const auto [k_under, k_over] =
        wald::ability_thresholds(problem, lambda_lo, lambda_hi, cost);
    const double e_star = wald::solve_effort(cost);

    wald::csv::Table t;
    t.header = {"k", "accuracy_lo", "accuracy_hi", "expected_time_lo", "expected_time_hi"};
    if (!grid_text.empty()) {
        for (double k : parse_grid(grid_text).values()) {
            wald::Problem base = problem;
            base.mu = k * problem.sigma;
            const auto row_for = [&](double lambda) {
                const wald::Problem eff =
                    wald::effective_problem(base, wald::AbilityProfile{lambda}, cost);
                const wald::CanonicalProblem cp = wald::canonicalize(eff);
                const wald::Boundaries b = wald::solve_boundaries(cp);
                if (b.immediate_stop) return std::pair{0.5, 0.0};
                return std::pair{wald::accuracy(b), wald::expected_stop_time(b, cp.k)};
            };
            const auto [acc_lo, time_lo] = row_for(lambda_lo);
            const auto [acc_hi, time_hi] = row_for(lambda_hi);
            t.rows.push_back({format_double(k), format_double(acc_lo), format_double(acc_hi),
                              format_double(time_lo), format_double(time_hi)});
        }
    }
    oopt.emit(t, {"e_star=" + format_double(e_star), "k_under=" + format_double(k_under),
                  "k_over=" + format_double(k_over)});
}

void run_cost(const std::string& cost_text, const std::string& grid_text,
              const OutputOptions& oopt) {
    if (grid_text.empty()) throw wald::ValidationError("cost requires --grid MIN:MAX:N:{log|lin}");
    const wald::PosteriorCost cost = parse_posterior_cost(cost_text);
    const auto grid = parse_grid(grid_text).values();
    const auto points = wald::expected_time_curve(grid, cost);
    wald::csv::Table t;
    t.header = {"kappa", "p_star", "c_star", "t_star"};
    for (const auto& pt : points)
        t.rows.push_back({format_double(pt.kappa), format_double(pt.p_star),
                          format_double(pt.c_star), format_double(pt.t_star)});
    oopt.emit(t, {"cost=" + cost.name});
}

void run_discount(double r, double mu, double sigma, const std::string& grid_text,
                  const OutputOptions& oopt) {
    wald::csv::Table t;
    t.header = {"k", "ell_star", "accuracy", "expected_time"};
    std::vector<double> ks;
    if (grid_text.empty()) ks.push_back(mu / sigma);
    else ks = parse_grid(grid_text).values();
    for (double k : ks) {
        const wald::DiscountedProblem dp{r, k};
        const double ell = wald::disc_boundary(dp);
        const wald::StopStats s = wald::disc_stats(dp);
        t.rows.push_back({format_double(k), format_double(ell), format_double(s.accuracy),
                          format_double(s.expected_time)});
    }
    oopt.emit(t, {"r=" + format_double(r)});
}

void run_probe(const std::string& problems_path, const std::string& shares_path, double eps,
               const OutputOptions& oopt) {
    if (problems_path.empty() == shares_path.empty())
        throw wald::ValidationError("probe needs exactly one of --problems or --shares");
    wald::ComplexityRanking ranking;
    if (!shares_path.empty()) {
        const wald::csv::Table t = wald::csv::read_file(shares_path);
        const std::size_t ii = t.column("problem_id");
        const std::size_t ib = t.column("baseline_share_b");
        const std::size_t is = t.column("shifted_share_b");
        const std::size_t in = t.column("n_obs");
        std::vector<wald::ShareObservation> obs;
        for (const auto& row : t.rows)
            obs.push_back({row[ii], wald::csv::parse_double(row[ib]),
                           wald::csv::parse_double(row[is]),
                           static_cast<std::int64_t>(wald::csv::parse_double(row[in]))});
        ranking = wald::rank_from_data(obs);
    } else {
        const wald::csv::Table t = wald::csv::read_file(problems_path);
        const std::size_t ii = t.column("problem_id");
        const std::size_t id = t.column("delta"), ip = t.column("p_tilde");
        const std::size_t im = t.column("mu"), isg = t.column("sigma"), ic = t.column("c");
        std::vector<std::pair<std::string, wald::Problem>> problems;
        for (const auto& row : t.rows) {
            const double delta = wald::csv::parse_double(row[id]);
            const double p_tilde = wald::csv::parse_double(row[ip]);
            const wald::PayoffMatrix payoffs{delta * (1.0 - p_tilde), 0.0, 0.0, delta * p_tilde};
            problems.emplace_back(row[ii],
                                  wald::Problem{payoffs, wald::csv::parse_double(row[im]),
                                                wald::csv::parse_double(row[isg]),
                                                wald::csv::parse_double(row[ic])});
        }
        double use_eps = eps;
        if (!(use_eps > 0.0) && !problems.empty())
            use_eps = wald::default_probe_eps(problems.front().second);
        ranking = wald::rank_problems(problems, use_eps);
    }
    wald::csv::Table t;
    t.header = {"problem_id", "delta", "se", "rank"};
    std::string weak_pairs;
    for (const auto& e : ranking.entries) {
        t.rows.push_back({e.id, format_double(e.delta), format_double(e.std_err),
                          std::to_string(e.rank)});
        if (!e.separation_significant && e.rank < static_cast<int>(ranking.entries.size()))
            weak_pairs += (weak_pairs.empty() ? "" : ";") + std::to_string(e.rank) + "-" +
                          std::to_string(e.rank + 1);
    }
    std::vector<std::string> comments;
    if (!weak_pairs.empty()) comments.push_back("not_significant_pairs=" + weak_pairs);
    oopt.emit(t, comments);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wald optimal-stopping laboratory: boundaries, speed/accuracy statistics, "
                 "Monte Carlo verification, and complexity probes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file; flags override");

    ProblemOptions popt;
    OutputOptions oopt;
    wald::SimConfig sim;
    std::string grid_text;
    std::string effort_cost = "quadratic_fixed:1,1";
    double lambda_lo = 1.0, lambda_hi = 4.0;
    std::string cost_text = "entropy";
    double disc_r = 0.5;
    std::string probe_problems, probe_shares;
    double probe_eps = 0.0;

    const auto add_common = [&](CLI::App* cmd, bool with_problem, bool with_grid) {
        if (with_problem) popt.attach(cmd);
        if (with_grid) cmd->add_option("--grid", grid_text, "Grid as MIN:MAX:N:{log|lin}");
        oopt.attach(cmd);
        return cmd;
    };

    auto* solve = add_common(app.add_subcommand("solve", "Boundaries and closed-form statistics "
                                                         "for one problem"),
                             true, false);
    auto* sweep = add_common(app.add_subcommand("sweep", "Speed/accuracy across a k grid"), true,
                             true);
    auto* simulate =
        add_common(app.add_subcommand("simulate", "Monte Carlo vs closed-form comparison"), true,
                   false);
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--paths", sim.n_paths, "Number of simulated paths")
        ->capture_default_str();
    simulate->add_option("--dt", sim.dt, "Euler step")->capture_default_str();
    simulate->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();

    auto* effort = add_common(app.add_subcommand("effort", "Ability thresholds and crossover "
                                                           "table"),
                              true, true);
    effort->add_option("--effort-cost", effort_cost, "Effort cost, e.g. quadratic_fixed:1,1")
        ->capture_default_str();
    effort->add_option("--lambda-lo", lambda_lo, "Low ability")->capture_default_str();
    effort->add_option("--lambda-hi", lambda_hi, "High ability")->capture_default_str();

    auto* cost = add_common(app.add_subcommand("cost", "Posterior-separable kappa curve"), false,
                            true);
    cost->add_option("--cost", cost_text, "entropy | quadratic | tab:PATH")
        ->capture_default_str();

    auto* discount = add_common(app.add_subcommand("discount", "Discounted variant sweep"), true,
                                true);
    discount->add_option("--r", disc_r, "Discount rate")->capture_default_str();

    auto* probe = add_common(app.add_subcommand("probe", "Incentive-perturbation complexity "
                                                         "ranking"),
                             false, false);
    probe->add_option("--problems", probe_problems,
                      "CSV of problems (problem_id,delta,p_tilde,mu,sigma,c)");
    probe->add_option("--shares", probe_shares,
                      "CSV of observed shares (problem_id,baseline_share_b,shifted_share_b,n_obs)");
    probe->add_option("--eps", probe_eps, "Bonus size (default: 1e-2 of stakes)");

    try {
        app.parse(argc, argv);
        sim.workers = std::min(sim.workers, worker_cap());
        if (solve->parsed()) run_solve(popt, oopt);
        else if (sweep->parsed()) run_sweep(popt, grid_text, oopt);
        else if (simulate->parsed()) run_simulate(popt, sim, oopt);
        else if (effort->parsed())
            run_effort(popt, effort_cost, lambda_lo, lambda_hi, grid_text, oopt);
        else if (cost->parsed()) run_cost(cost_text, grid_text, oopt);
        else if (discount->parsed())
            run_discount(disc_r, popt.mu, popt.sigma, grid_text, oopt);
        else if (probe->parsed()) run_probe(probe_problems, probe_shares, probe_eps, oopt);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << "error_code=E_VALIDATION message=" << e.what() << "\n";
        return 2;
    } catch (const wald::ConvergenceFailure& e) {
        std::cerr << "error_code=E_CONVERGENCE message=" << e.what() << "\n";
        return 3;
    } catch (const wald::BracketError& e) {
        std::cerr << "error_code=E_BRACKET message=" << e.what() << "\n";
        return 3;
    } catch (const wald::NumericalInstability& e) {
        std::cerr << "error_code=E_NUMERICAL message=" << e.what() << "\n";
        return 3;
    } catch (const wald::Error& e) {
        std::cerr << "error_code=E_VALIDATION message=" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error_code=E_INTERNAL message=" << e.what() << "\n";
        return 3;
    }
}
