#pragma once

#include <span>

#include "klsolve/model.hpp"

namespace klsolve {

// Generalized Kullback-Leibler divergence
//
//   D(a || b) = sum_i  b_i log(b_i / a_i) - b_i + a_i
//
// defined for positive a and non-negative b, with 0 log 0 = 0 so a b_i = 0
// term contributes a_i. Unlike the probability KL divergence it needs no
// normalization and is zero exactly when a == b. Each term is clamped at
// zero to absorb rounding.
//
// Throws DimensionError on length mismatch, DomainError if some a_i <= 0 or
// b_i < 0.
double gen_kl(std::span<const double> a, std::span<const double> b);

// Scalar form of one term.
double gen_kl(double a, double b);

// sum_i D(sum_alpha a_{i alpha} x^alpha || b_i): the objective the solver
// decreases.
double system_divergence(const PolynomialSystem& sys, const SolutionState& x);

// D(t a || b) - [D(a || b) + (t - 1) sum a - (sum b) log t]. Zero up to
// rounding for positive a, b, t.
double scaling_identity_residual(std::span<const double> a, std::span<const double> b, double t);

// D(a || b) - [D(sum a || sum b) + D((sum b / sum a) a || b)]. Zero up to
// rounding for positive a, b.
double normalizing_identity_residual(std::span<const double> a, std::span<const double> b);

}  // namespace klsolve
