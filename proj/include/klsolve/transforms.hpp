#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "klsolve/model.hpp"
#include "klsolve/structure.hpp"

namespace klsolve {

// sum_alpha a_{i alpha} x^alpha = 0 with coefficients of any sign and
// non-negative integer exponents.
struct GeneralPolynomialSystem {
    std::vector<std::string> variables;
    std::vector<std::vector<int>> monomials;
    std::vector<std::vector<double>> coefficients;  // equations x monomials
};

// Throws InputError on shape errors, negative exponents, non-finite or
// all-zero equations, and variables that occur in no monomial.
void validate_general_system(const GeneralPolynomialSystem& gsys);

struct TransformCertificate {
    int degree = 0;                  // d, the maximum total degree of the input
    std::vector<double> shifts;      // b_i added per original equation
    std::size_t homogenizing_variable = 0;  // index of the added variable in the output
    std::string homogenizing_name;
    // True when the input had no monomial below degree d, so the pure power
    // of the added variable was inserted to keep it in the system.
    bool added_pure_power = false;
    double condition_estimate = 0.0;  // 2-norm condition number of the output coefficient matrix
};

struct TransformedSystem {
    PolynomialSystem system;
    TransformCertificate certificate;
};

// Homogenizes with one extra variable z, appends the normalization equation
// sum_alpha x^alpha z^(d - |alpha|) = 1, and adds shift_i times it to every
// original equation so that all coefficients become positive. Positive roots
// x of the input correspond to positive roots of the output through
// x_i = x'_i / z'.
TransformedSystem homogenize_positivize(const GeneralPolynomialSystem& gsys);

// Image of a positive root of the input system in the transformed variables.
std::vector<double> map_to_transformed(const GeneralPolynomialSystem& gsys, const TransformCertificate& cert,
                                       std::span<const double> x);

// x_i = x'_i / z'
std::vector<double> map_back(const TransformCertificate& cert, std::span<const double> transformed);

struct BilinearInstance {
    PolynomialSystem system;
    DegreeStructure structure;
    std::size_t expected_count = 0;
    // Positive solutions obtained by elimination, one per subset of m-1 forms.
    std::vector<std::vector<double>> oracle_solutions;
    std::vector<std::vector<double>> linear_forms;  // the 2m-2 forms after the coordinate change
};

// Bilinear system in 2m variables with C(2m-2, m-1) positive solutions.
// Requires 2 <= m <= 4. Throws InputError for other m and std::runtime_error
// if no generic instance was found within the retry budget.
BilinearInstance generate_bilinear_instance(int m, std::uint64_t seed);

std::size_t binomial(std::size_t n, std::size_t k);

struct PlantedSystem {
    PolynomialSystem system;
    SolutionState solution;
};

// b = A (x*)^alpha for the given coefficient matrix and point.
PlantedSystem plant_solution(std::vector<std::string> variables, std::vector<ExponentVector> monomials,
                             std::vector<std::vector<double>> coefficients, SolutionState solution);

// Random positive x* in [0.5, 2] and random sparse non-negative A with the
// given number of equations (default: one per variable). Throws InputError
// when the monomial set admits no detectable degree structure.
PlantedSystem plant_solution(std::size_t n, const std::vector<ExponentVector>& monomials, std::uint64_t seed,
                             std::size_t equations = 0);

}  // namespace klsolve
