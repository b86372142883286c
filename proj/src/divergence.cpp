#include "klsolve/divergence.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <vector>

#include "klsolve/error.hpp"

namespace klsolve {

namespace {

double sum(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

void check_lengths(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw DimensionError("divergence arguments have lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
}

}  // namespace

double gen_kl(double a, double b)
{
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("divergence requires a > 0");
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("divergence requires b >= 0");
    if (b == 0.0) return a;
    double term = b * std::log(b / a) - b + a;
    // Mathematically non-negative; anything below is cancellation.
    assert(term > -1e-12 * (a + b));
    return term > 0.0 ? term : 0.0;
}

double gen_kl(std::span<const double> a, std::span<const double> b)
{
    check_lengths(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += gen_kl(a[i], b[i]);
    return total;
}

double system_divergence(const PolynomialSystem& sys, const SolutionState& x)
{
    return gen_kl(equation_values(sys, evaluate_monomials(sys, x.values())), sys.rhs());
}

double scaling_identity_residual(std::span<const double> a, std::span<const double> b, double t)
{
    check_lengths(a, b);
    if (!(t > 0.0)) throw DomainError("scaling factor must be positive");
    std::vector<double> scaled(a.begin(), a.end());
    for (double& v : scaled) v *= t;
    double rhs = gen_kl(a, b) + (t - 1.0) * sum(a) - sum(b) * std::log(t);
    return gen_kl(scaled, b) - rhs;
}

double normalizing_identity_residual(std::span<const double> a, std::span<const double> b)
{
    check_lengths(a, b);
    const double total_a = sum(a);
    const double total_b = sum(b);
    std::vector<double> rescaled(a.begin(), a.end());
    for (double& v : rescaled) v *= total_b / total_a;
    return gen_kl(a, b) - (gen_kl(total_a, total_b) + gen_kl(rescaled, b));
}

}  // namespace klsolve
