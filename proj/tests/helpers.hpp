#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "klsolve/divergence.hpp"
#include "klsolve/model.hpp"
#include "klsolve/solver.hpp"
#include "klsolve/structure.hpp"
#include "klsolve/transforms.hpp"

namespace klsolve::testing {

inline PolynomialSystem make_system(std::vector<std::string> vars, std::vector<ExponentVector> monomials,
                                    std::vector<std::vector<double>> coefficients, std::vector<double> rhs)
{
    return PolynomialSystem::from_data({std::move(vars), std::move(monomials), std::move(coefficients), std::move(rhs)});
}

// {x^2 = 4}
inline PolynomialSystem square_system()
{
    return make_system({"x"}, {{2}}, {{1}}, {4});
}

// {x = 1, x = 2}
inline PolynomialSystem conflicting_system()
{
    return make_system({"x"}, {{1}}, {{1}, {1}}, {1, 2});
}

// {xy = 6, x = 2, y = 3}
inline PolynomialSystem product_system()
{
    return make_system({"x", "y"}, {{1, 1}, {1, 0}, {0, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {6, 2, 3});
}

inline DegreeStructure ones_structure(std::size_t n, double d)
{
    return {{std::vector<double>(n, 1.0)}, {d}};
}

// Central differences of system_divergence with step h_i = rel_step * x_i.
inline std::vector<double> finite_difference_gradient(const PolynomialSystem& sys, const SolutionState& x,
                                                      double rel_step = 1e-6)
{
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto plus = x.vector();
        auto minus = x.vector();
        const double h = rel_step * x[i];
        plus[i] += h;
        minus[i] -= h;
        grad[i] = (system_divergence(sys, SolutionState(plus)) - system_divergence(sys, SolutionState(minus))) /
                  (2.0 * h);
    }
    return grad;
}

inline double sup_norm(const std::vector<double>& v)
{
    double r = 0.0;
    for (double e : v) r = std::max(r, std::abs(e));
    return r;
}

inline std::vector<double> random_positive(std::mt19937_64& rng, std::size_t len, double lo = 0.01, double hi = 10.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(len);
    for (double& e : v) e = dist(rng);
    return v;
}

// Homogeneous monomial set of total degree d containing every pure power d e_i.
inline std::vector<ExponentVector> random_homogeneous_monomials(std::mt19937_64& rng, std::size_t n, int d,
                                                                std::size_t count)
{
    std::set<ExponentVector> set;
    for (std::size_t i = 0; i < n; ++i) {
        ExponentVector alpha(n, 0.0);
        alpha[i] = d;
        set.insert(alpha);
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int tries = 0; set.size() < count && tries < 1000; ++tries) {
        ExponentVector alpha(n, 0.0);
        for (int unit = 0; unit < d; ++unit) alpha[pick(rng)] += 1.0;
        set.insert(alpha);
    }
    return {set.begin(), set.end()};
}

// Multilinear monomial set: variables split into `groups` blocks, each
// monomial takes at most one variable per block. Every single variable is
// included so each variable has a pure power.
inline std::vector<ExponentVector> random_multilinear_monomials(std::mt19937_64& rng, std::size_t n,
                                                                std::size_t groups, std::size_t count)
{
    groups = std::min(groups, n);
    std::vector<std::size_t> block(n);
    for (std::size_t i = 0; i < n; ++i) block[i] = i % groups;
    std::set<ExponentVector> set;
    for (std::size_t i = 0; i < n; ++i) {
        ExponentVector alpha(n, 0.0);
        alpha[i] = 1.0;
        set.insert(alpha);
    }
    std::bernoulli_distribution coin(0.6);
    for (int tries = 0; set.size() < count && tries < 1000; ++tries) {
        ExponentVector alpha(n, 0.0);
        for (std::size_t g = 0; g < groups; ++g) {
            if (!coin(rng)) continue;
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i) {
                if (block[i] == g) members.push_back(i);
            }
            std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
            alpha[members[pick(rng)]] = 1.0;
        }
        set.insert(alpha);
    }
    return {set.begin(), set.end()};
}

}  // namespace klsolve::testing
