#include "klsolve/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "klsolve/divergence.hpp"
#include "klsolve/error.hpp"

namespace klsolve {

namespace {

// Slack for "non-increasing" checks on divergences of size ~1.
double monotone_slack(double value)
{
    return 1e-10 * std::max(1.0, std::abs(value));
}

double sup_norm(std::span<const double> v)
{
    double r = 0.0;
    for (double e : v) r = std::max(r, std::abs(e));
    return r;
}

// Numerator and denominator of the row-j update factor for variable i, with
// the common g_{ji} factor left out.
struct RowSums {
    std::vector<double> weight;  // sum_alpha alpha_i w_alpha
    std::vector<double> model;   // sum_alpha alpha_i a_alpha x^alpha
};

RowSums row_sums(const PolynomialSystem& sys, const WeightVector& w, std::span<const double> monomial_values)
{
    const std::size_t n = sys.num_variables();
    RowSums sums{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const auto& a = sys.column_sums();
    for (std::size_t k = 0; k < sys.num_monomials(); ++k) {
        const auto& alpha = sys.monomials()[k];
        const double term = a[k] * monomial_values[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] == 0.0) continue;
            sums.weight[i] += alpha[i] * w.w[k];
            sums.model[i] += alpha[i] * term;
        }
    }
    return sums;
}

void check_dimensions(const PolynomialSystem& sys, const SolutionState& x)
{
    if (x.size() != sys.num_variables()) {
        throw DimensionError("point has " + std::to_string(x.size()) + " entries, system has " +
                             std::to_string(sys.num_variables()) + " variables");
    }
}

}  // namespace

void SolverConfig::validate() const
{
    if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(gradient_tol > 0.0) || !(boundary_eps > 0.0) ||
        !(cluster_tol > 0.0)) {
        throw InputError("solver tolerances must be positive");
    }
    if (!(init_low > 0.0) || !(init_low < init_high) || !std::isfinite(init_high)) {
        throw InputError("initialization bounds must satisfy 0 < low < high");
    }
    if (max_inner == 0 || max_outer == 0) throw InputError("iteration caps must be at least 1");
}

const char* to_string(SolveStatus status)
{
    switch (status) {
        case SolveStatus::critical_point: return "critical-point";
        case SolveStatus::boundary: return "boundary";
        case SolveStatus::max_iterations: return "max-iterations";
    }
    return "unknown";
}

WeightVector compute_weights(const PolynomialSystem& sys, const SolutionState& x)
{
    check_dimensions(sys, x);
    const auto m = evaluate_monomials(sys, x.values());
    const auto p = equation_values(sys, m);
    WeightVector w{std::vector<double>(sys.num_monomials(), 0.0)};
    for (std::size_t i = 0; i < sys.num_equations(); ++i) {
        const double share = sys.rhs()[i] / p[i];
        auto r = sys.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) w.w[k] += share * r[k] * m[k];
    }
    return w;
}

double inner_objective(const PolynomialSystem& sys, const WeightVector& w, const SolutionState& x)
{
    auto m = evaluate_monomials(sys, x.values());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] *= sys.column_sums()[k];
    return gen_kl(m, w.w);
}

SolutionState ipf_update(const PolynomialSystem& sys, const DegreeStructure& ds, std::size_t j,
                         const WeightVector& w, const SolutionState& x)
{
    check_dimensions(sys, x);
    const auto m = evaluate_monomials(sys, x.values());
    const auto sums = row_sums(sys, w, m);
    const auto& g = ds.g.at(j);
    const double dj = ds.d.at(j);

    std::vector<double> next = x.vector();
    for (std::size_t i = 0; i < next.size(); ++i) {
        if (g[i] == 0.0) continue;
        const double num = sums.weight[i];
        const double den = sums.model[i];
        if (num == 0.0 && den == 0.0) continue;
        assert(den > 0.0);
        next[i] = x[i] * std::pow(num / den, g[i] / dj);
        // Underflow is left to the boundary detector; keep the state representable.
        if (!(next[i] > 0.0)) next[i] = std::numeric_limits<double>::denorm_min();
    }
    return SolutionState(std::move(next));
}

double ipf_decrease_bound(const PolynomialSystem& sys, const DegreeStructure& ds, std::size_t j,
                          const WeightVector& w, const SolutionState& x)
{
    const auto m = evaluate_monomials(sys, x.values());
    const auto sums = row_sums(sys, w, m);
    const auto& g = ds.g.at(j);
    double c = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0.0 || (sums.model[i] == 0.0 && sums.weight[i] == 0.0)) continue;
        c += gen_kl(g[i] * sums.model[i], g[i] * sums.weight[i]);
    }
    return c;
}

InnerResult inner_loop(const PolynomialSystem& sys, const DegreeStructure& ds, const WeightVector& w,
                       const SolutionState& x, const SolverConfig& cfg)
{
    InnerResult result;
    result.x = x;
    result.objective_before = inner_objective(sys, w, x);
    double objective = result.objective_before;
    const std::size_t cap = cfg.single_sweep ? 1 : cfg.max_inner;

    for (std::size_t sweep = 0; sweep < cap; ++sweep) {
        const SolutionState start = result.x;
        for (std::size_t j = 0; j < ds.rows(); ++j) {
            if (cfg.keep_inner_reports) {
                InnerStepReport step;
                step.row = j;
                step.row_degree = ds.d[j];
                step.decrease_bound = ipf_decrease_bound(sys, ds, j, w, result.x);
                step.divergence_before = inner_objective(sys, w, result.x);
                result.x = ipf_update(sys, ds, j, w, result.x);
                step.divergence_after = inner_objective(sys, w, result.x);
                result.steps.push_back(step);
            } else {
                result.x = ipf_update(sys, ds, j, w, result.x);
            }
        }
        ++result.sweeps_executed;

        const double next_objective = inner_objective(sys, w, result.x);
        if (next_objective > objective + monotone_slack(objective)) ++result.monotonicity_violations;
        objective = next_objective;

        double change = 0.0;
        for (std::size_t i = 0; i < start.size(); ++i) {
            change = std::max(change, std::abs(result.x[i] - start[i]) / start[i]);
        }
        if (change < cfg.inner_tol) {
            result.converged = true;
            break;
        }
        ++result.sweeps;
        if (result.x.min() <= cfg.boundary_eps) break;
    }
    result.objective_after = objective;
    assert(result.monotonicity_violations == 0);
    return result;
}

std::vector<double> analytic_gradient(const PolynomialSystem& sys, const SolutionState& x)
{
    check_dimensions(sys, x);
    const std::size_t n = sys.num_variables();
    const auto m = evaluate_monomials(sys, x.values());
    const auto p = equation_values(sys, m);
    std::vector<double> grad(n, 0.0);
    for (std::size_t e = 0; e < sys.num_equations(); ++e) {
        const double factor = 1.0 - sys.rhs()[e] / p[e];
        auto r = sys.row(e);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] == 0.0) continue;
            const auto& alpha = sys.monomials()[k];
            for (std::size_t i = 0; i < n; ++i) {
                if (alpha[i] != 0.0) grad[i] += factor * r[k] * alpha[i] * m[k] / x[i];
            }
        }
    }
    return grad;
}

SolutionState random_start(std::size_t n, std::uint64_t seed, const SolverConfig& cfg)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(cfg.init_low, cfg.init_high);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return SolutionState(std::move(x));
}

SolveReport solve(const PolynomialSystem& sys, const DegreeStructure& ds, const SolverConfig& cfg,
                  std::optional<SolutionState> x0)
{
    cfg.validate();
    const auto check = verify_degree_structure(sys, ds);
    if (!check.ok()) {
        std::string msg = "degree structure does not fit the system";
        for (const auto& e : check.errors) msg += "\n  " + e;
        for (const auto& v : check.violations) msg += "\n  " + v.message;
        throw InputError(msg);
    }

    SolveReport report;
    report.seed = cfg.seed;
    SolutionState x = x0 ? std::move(*x0) : random_start(sys.num_variables(), cfg.seed, cfg);
    check_dimensions(sys, x);

    double divergence = system_divergence(sys, x);
    report.divergence_trace.push_back(divergence);

    if (x.min() <= cfg.boundary_eps) {
        report.status = SolveStatus::boundary;
    } else {
        report.status = SolveStatus::max_iterations;
        for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
            const auto w = compute_weights(sys, x);
            auto inner = inner_loop(sys, ds, w, x, cfg);
            x = std::move(inner.x);
            report.total_inner_iterations += inner.sweeps_executed;
            if (cfg.keep_inner_reports) {
                report.inner_steps.insert(report.inner_steps.end(), inner.steps.begin(), inner.steps.end());
            }
            ++report.outer_iterations;

            const double next = system_divergence(sys, x);
            report.divergence_trace.push_back(next);
            if (next > divergence + monotone_slack(divergence)) ++report.monotonicity_violations;
            const double decrease = divergence - next;
            divergence = next;

            if (x.min() <= cfg.boundary_eps) {
                report.status = SolveStatus::boundary;
                break;
            }
            if (decrease < cfg.outer_tol && sup_norm(analytic_gradient(sys, x)) <= cfg.gradient_tol) {
                report.status = SolveStatus::critical_point;
                break;
            }
        }
    }
    assert(report.monotonicity_violations == 0);

    report.divergence_final = divergence;
    report.gradient_residual = sup_norm(analytic_gradient(sys, x));
    report.x_final = std::move(x);
    return report;
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart)
{
    return seed ^ static_cast<std::uint64_t>(restart);
}

double relative_distance(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) throw DimensionError("points have different lengths");
    double diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(x[i] - y[i]));
    const double scale = std::max(sup_norm(x), sup_norm(y));
    return scale > 0.0 ? diff / scale : diff;
}

MultiStartResult multi_start(const PolynomialSystem& sys, const DegreeStructure& ds, const SolverConfig& cfg)
{
    cfg.validate();
    if (cfg.restarts == 0) throw InputError("restarts must be at least 1");

    std::vector<SolveReport> reports(cfg.restarts);
    auto run = [&](std::size_t r) {
        SolverConfig local = cfg;
        local.seed = restart_seed(cfg.seed, r);
        reports[r] = solve(sys, ds, local);
    };

    const std::size_t workers = std::min<std::size_t>(cfg.threads, cfg.restarts);
    if (workers <= 1) {
        for (std::size_t r = 0; r < cfg.restarts; ++r) run(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < cfg.restarts; r = next++) {
                    try {
                        run(r);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    MultiStartResult result;
    result.restart_index.resize(cfg.restarts);
    std::iota(result.restart_index.begin(), result.restart_index.end(), 0);
    std::stable_sort(result.restart_index.begin(), result.restart_index.end(), [&](std::size_t l, std::size_t r) {
        return reports[l].divergence_final < reports[r].divergence_final;
    });
    for (std::size_t idx : result.restart_index) result.reports.push_back(std::move(reports[idx]));

    for (std::size_t r = 0; r < result.reports.size(); ++r) {
        const auto& report = result.reports[r];
        auto it = std::find_if(result.solutions.begin(), result.solutions.end(), [&](const SolutionCluster& c) {
            return relative_distance(c.x.values(), report.x_final.values()) < cfg.cluster_tol;
        });
        if (it == result.solutions.end()) {
            SolutionCluster cluster;
            cluster.x = report.x_final;
            cluster.divergence = report.divergence_final;
            cluster.status = report.status;
            cluster.members.push_back(r);
            result.solutions.push_back(std::move(cluster));
        } else {
            it->members.push_back(r);
        }
    }
    return result;
}

}  // namespace klsolve
