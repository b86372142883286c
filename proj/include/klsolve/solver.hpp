#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "klsolve/model.hpp"
#include "klsolve/structure.hpp"

namespace klsolve {

struct SolverConfig {
    double inner_tol = 1e-10;     // relative sup-norm change of x per inner sweep
    double outer_tol = 1e-9;      // divergence decrease per outer iteration
    double gradient_tol = 1e-9;   // sup-norm of the gradient required to stop as critical point
    std::size_t max_inner = 200;
    std::size_t max_outer = 10000;
    double boundary_eps = 1e-12;
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    double init_low = 0.1;
    double init_high = 1.0;
    // One inner sweep per outer iteration instead of running the inner loop
    // to inner_tol. Still decreases the objective every outer step.
    bool single_sweep = false;
    double cluster_tol = 1e-6;    // relative distance under which restarts are one solution
    unsigned threads = 0;         // 0 = run restarts sequentially
    bool keep_inner_reports = false;

    // Throws InputError if a tolerance is not positive or the init bounds are not 0 < low < high.
    void validate() const;
};

// w_alpha: each equation's mass b_i split across its monomials in proportion
// to the current term values.
struct WeightVector {
    std::vector<double> w;
};

struct InnerStepReport {
    std::size_t row = 0;
    double row_degree = 0.0;
    // C = sum_i D(sum_alpha alpha_i g_{ji} a_alpha x^alpha || sum_alpha alpha_i g_{ji} w_alpha),
    // evaluated before the step. The step lowers the inner objective by at
    // least decrease_bound / row_degree.
    double decrease_bound = 0.0;
    double divergence_before = 0.0;
    double divergence_after = 0.0;
};

struct InnerResult {
    SolutionState x;
    std::size_t sweeps = 0;           // sweeps that moved x by at least inner_tol
    std::size_t sweeps_executed = 0;  // including the final confirming sweep
    bool converged = false;
    double objective_before = 0.0;
    double objective_after = 0.0;
    std::size_t monotonicity_violations = 0;
    std::vector<InnerStepReport> steps;  // filled when keep_inner_reports is set
};

enum class SolveStatus { critical_point, boundary, max_iterations };

const char* to_string(SolveStatus status);

struct SolveReport {
    SolutionState x_final;
    double divergence_final = 0.0;
    std::vector<double> divergence_trace;  // entry 0 is the starting point
    double gradient_residual = 0.0;
    SolveStatus status = SolveStatus::max_iterations;
    std::size_t outer_iterations = 0;
    std::size_t total_inner_iterations = 0;
    std::size_t monotonicity_violations = 0;
    std::uint64_t seed = 0;
    std::vector<InnerStepReport> inner_steps;  // filled when keep_inner_reports is set
};

WeightVector compute_weights(const PolynomialSystem& sys, const SolutionState& x);

// sum_alpha D(a_alpha x^alpha || w_alpha)
double inner_objective(const PolynomialSystem& sys, const WeightVector& w, const SolutionState& x);

// One multiplicative update for row j of the degree structure, applied to all
// coordinates at once. Coordinates untouched by row j are returned unchanged.
SolutionState ipf_update(const PolynomialSystem& sys, const DegreeStructure& ds, std::size_t j,
                         const WeightVector& w, const SolutionState& x);

// C for row j at x (see InnerStepReport::decrease_bound).
double ipf_decrease_bound(const PolynomialSystem& sys, const DegreeStructure& ds, std::size_t j,
                          const WeightVector& w, const SolutionState& x);

// Sweeps j = 0..s-1 until x stabilizes or max_inner sweeps have run.
InnerResult inner_loop(const PolynomialSystem& sys, const DegreeStructure& ds, const WeightVector& w,
                       const SolutionState& x, const SolverConfig& cfg);

// Gradient of system_divergence at x.
std::vector<double> analytic_gradient(const PolynomialSystem& sys, const SolutionState& x);

// Uniform draw from [init_low, init_high] per coordinate.
SolutionState random_start(std::size_t n, std::uint64_t seed, const SolverConfig& cfg);

// Alternates weight computation and the inner loop. Without x0 the start is
// random_start(n, cfg.seed, cfg). Throws InputError if ds does not fit sys.
SolveReport solve(const PolynomialSystem& sys, const DegreeStructure& ds, const SolverConfig& cfg,
                  std::optional<SolutionState> x0 = std::nullopt);

struct SolutionCluster {
    SolutionState x;           // the member with the smallest divergence
    double divergence = 0.0;
    SolveStatus status = SolveStatus::max_iterations;
    std::vector<std::size_t> members;  // indices into MultiStartResult::reports
};

struct MultiStartResult {
    std::vector<SolveReport> reports;      // sorted by divergence_final, ties by restart index
    std::vector<std::size_t> restart_index;  // original restart of each sorted report
    std::vector<SolutionCluster> solutions;  // in order of increasing divergence
};

// Per-restart seed: cfg.seed XOR restart index.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

// max_i |x_i - y_i| / max(|x|_inf, |y|_inf)
double relative_distance(std::span<const double> x, std::span<const double> y);

// Runs cfg.restarts independent solves, on up to cfg.threads threads. Output
// does not depend on the thread count.
MultiStartResult multi_start(const PolynomialSystem& sys, const DegreeStructure& ds, const SolverConfig& cfg);

}  // namespace klsolve
