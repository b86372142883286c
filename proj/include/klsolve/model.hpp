#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace klsolve {

// Multi-index alpha of a monomial x^alpha. Entries are non-negative reals.
using ExponentVector = std::vector<double>;

// Unvalidated system data as read from a file or built by a generator.
// coefficients[i][k] is the coefficient of monomials[k] in equation i.
struct SystemData {
    std::vector<std::string> variables;
    std::vector<ExponentVector> monomials;
    std::vector<std::vector<double>> coefficients;
    std::vector<double> rhs;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

// Checks signs, shapes, empty rows and variable coverage. Missing pure powers
// of a variable are reported as warnings: the iteration is then not
// guaranteed to stay bounded, but the system is still usable.
ValidationReport validate_system(const SystemData& data);

// A system  sum_k a_{ik} x^{alpha_k} = b_i  with a >= 0 and b > 0, held in
// canonical form: duplicate monomials merged, all-zero monomial columns
// dropped, monomials sorted lexicographically. Immutable after construction.
class PolynomialSystem {
public:
    // Empty system with no variables; use from_data to build a real one.
    PolynomialSystem() = default;

    // Validates, canonicalizes and builds. Throws InputError listing every
    // validation error.
    static PolynomialSystem from_data(SystemData data);

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_equations() const { return rhs_.size(); }
    std::size_t num_monomials() const { return monomials_.size(); }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<ExponentVector>& monomials() const { return monomials_; }
    const std::vector<double>& rhs() const { return rhs_; }
    // a_alpha = sum_i a_{i alpha}
    const std::vector<double>& column_sums() const { return column_sums_; }

    std::span<const double> row(std::size_t equation) const
    {
        return {coefficients_.data() + equation * monomials_.size(), monomials_.size()};
    }
    double coefficient(std::size_t equation, std::size_t monomial) const
    {
        return coefficients_[equation * monomials_.size() + monomial];
    }

    double rhs_total() const;

    SystemData to_data() const;

private:
    std::vector<std::string> variables_;
    std::vector<ExponentVector> monomials_;
    std::vector<double> coefficients_;  // row-major, equations x monomials
    std::vector<double> rhs_;
    std::vector<double> column_sums_;
};

// Warnings-only validation of an already constructed system.
ValidationReport validate_system(const PolynomialSystem& sys);

// Strictly positive point x. Entries never leave the open positive orthant.
class SolutionState {
public:
    SolutionState() = default;
    // Throws DomainError if an entry is not finite and strictly positive.
    explicit SolutionState(std::vector<double> x);

    std::size_t size() const { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }
    std::span<const double> values() const { return x_; }
    const std::vector<double>& vector() const { return x_; }
    double min() const;

private:
    std::vector<double> x_;
};

// x^alpha. Integer exponents take an exact-power path; otherwise the value is
// exp(sum_i alpha_i log x_i).
double evaluate_monomial(std::span<const double> x, std::span<const double> alpha);

// x^alpha for every monomial of the system, in monomial order.
std::vector<double> evaluate_monomials(const PolynomialSystem& sys, std::span<const double> x);

// p_i = sum_alpha a_{i alpha} m_alpha, given precomputed monomial values.
std::vector<double> equation_values(const PolynomialSystem& sys, std::span<const double> monomial_values);

struct ResidualReport {
    std::vector<double> lhs;
    std::vector<double> rhs;
    double max_abs_residual = 0.0;
    double divergence = 0.0;
};

// Throws DimensionError if x does not have one entry per variable.
ResidualReport evaluate_system(const PolynomialSystem& sys, const SolutionState& x);

}  // namespace klsolve
