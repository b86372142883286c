#include "klsolve/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "klsolve/divergence.hpp"
#include "klsolve/error.hpp"

namespace klsolve {

namespace {

bool is_pure_power_of(const ExponentVector& alpha, std::size_t var)
{
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i == var ? !(alpha[i] > 0.0) : alpha[i] != 0.0) return false;
    }
    return true;
}

void add_pure_power_warnings(const std::vector<std::string>& variables, const std::vector<ExponentVector>& monomials,
                             const std::vector<bool>& live, std::vector<std::string>& warnings)
{
    for (std::size_t v = 0; v < variables.size(); ++v) {
        bool found = false;
        for (std::size_t k = 0; k < monomials.size() && !found; ++k) {
            found = live[k] && is_pure_power_of(monomials[k], v);
        }
        if (!found) {
            warnings.push_back("no pure power of variable '" + variables[v] +
                               "' among the monomials; iterates are not guaranteed to stay bounded");
        }
    }
}

}  // namespace

ValidationReport validate_system(const SystemData& data)
{
    ValidationReport report;
    auto& errors = report.errors;
    const std::size_t n = data.variables.size();
    const std::size_t m = data.monomials.size();

    if (n == 0) errors.push_back("system has no variables");
    if (m == 0) errors.push_back("system has no monomials");
    if (data.rhs.empty()) errors.push_back("system has no equations");

    std::set<std::string> names;
    for (const auto& name : data.variables) {
        if (name.empty()) errors.push_back("variable names must be non-empty");
        if (!names.insert(name).second) errors.push_back("duplicate variable name '" + name + "'");
    }

    bool shapes_ok = true;
    for (std::size_t k = 0; k < m; ++k) {
        const auto& alpha = data.monomials[k];
        if (alpha.size() != n) {
            errors.push_back("monomial " + std::to_string(k) + " has " + std::to_string(alpha.size()) +
                             " exponents, expected " + std::to_string(n));
            shapes_ok = false;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(alpha[i]) || alpha[i] < 0.0) {
                errors.push_back("monomial " + std::to_string(k) + " exponent " + std::to_string(i) +
                                 " must be finite and non-negative");
            }
        }
    }
    if (data.coefficients.size() != data.rhs.size()) {
        errors.push_back("coefficient rows (" + std::to_string(data.coefficients.size()) +
                         ") do not match rhs entries (" + std::to_string(data.rhs.size()) + ")");
        shapes_ok = false;
    }
    for (std::size_t i = 0; i < data.coefficients.size(); ++i) {
        const auto& row = data.coefficients[i];
        if (row.size() != m) {
            errors.push_back("equation " + std::to_string(i) + " has " + std::to_string(row.size()) +
                             " coefficients, expected " + std::to_string(m));
            shapes_ok = false;
            continue;
        }
        bool any_positive = false;
        for (std::size_t k = 0; k < m; ++k) {
            if (!std::isfinite(row[k]) || row[k] < 0.0) {
                errors.push_back("equation " + std::to_string(i) + " coefficient " + std::to_string(k) +
                                 " must be finite and non-negative");
            }
            any_positive = any_positive || row[k] > 0.0;
        }
        if (!any_positive) errors.push_back("equation " + std::to_string(i) + " has no positive coefficient");
    }
    for (std::size_t i = 0; i < data.rhs.size(); ++i) {
        if (!std::isfinite(data.rhs[i]) || !(data.rhs[i] > 0.0)) {
            errors.push_back("rhs must be strictly positive (equation " + std::to_string(i) + ")");
        }
    }
    if (!shapes_ok || n == 0) return report;

    // Columns that survive canonicalization.
    std::vector<bool> live(m, false);
    for (const auto& row : data.coefficients) {
        for (std::size_t k = 0; k < m; ++k) live[k] = live[k] || row[k] > 0.0;
    }
    for (std::size_t v = 0; v < n; ++v) {
        bool appears = false;
        for (std::size_t k = 0; k < m && !appears; ++k) appears = live[k] && data.monomials[k][v] > 0.0;
        if (!appears) {
            errors.push_back("variable '" + data.variables[v] +
                             "' appears in no monomial with a positive exponent and coefficient");
        }
    }
    add_pure_power_warnings(data.variables, data.monomials, live, report.warnings);
    return report;
}

PolynomialSystem PolynomialSystem::from_data(SystemData data)
{
    auto report = validate_system(data);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "invalid polynomial system:";
        for (const auto& e : report.errors) msg << "\n  " << e;
        throw InputError(msg.str());
    }

    const std::size_t m = data.monomials.size();
    const std::size_t rows = data.rhs.size();

    // Sort monomials, merging equal exponent vectors by summing columns.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return data.monomials[l] < data.monomials[r]; });

    PolynomialSystem sys;
    sys.variables_ = std::move(data.variables);
    sys.rhs_ = std::move(data.rhs);
    std::vector<std::vector<double>> columns;
    for (std::size_t idx : order) {
        const auto& alpha = data.monomials[idx];
        if (sys.monomials_.empty() || sys.monomials_.back() != alpha) {
            sys.monomials_.push_back(alpha);
            columns.emplace_back(rows, 0.0);
        }
        for (std::size_t i = 0; i < rows; ++i) columns.back()[i] += data.coefficients[i][idx];
    }

    std::vector<ExponentVector> kept;
    std::vector<std::vector<double>> kept_columns;
    for (std::size_t k = 0; k < sys.monomials_.size(); ++k) {
        double total = std::accumulate(columns[k].begin(), columns[k].end(), 0.0);
        if (total > 0.0) {
            kept.push_back(std::move(sys.monomials_[k]));
            kept_columns.push_back(std::move(columns[k]));
            sys.column_sums_.push_back(total);
        }
    }
    sys.monomials_ = std::move(kept);

    const std::size_t cols = sys.monomials_.size();
    sys.coefficients_.assign(rows * cols, 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        for (std::size_t i = 0; i < rows; ++i) sys.coefficients_[i * cols + k] = kept_columns[k][i];
    }
    return sys;
}

double PolynomialSystem::rhs_total() const
{
    return std::accumulate(rhs_.begin(), rhs_.end(), 0.0);
}

SystemData PolynomialSystem::to_data() const
{
    SystemData data;
    data.variables = variables_;
    data.monomials = monomials_;
    data.rhs = rhs_;
    for (std::size_t i = 0; i < num_equations(); ++i) {
        auto r = row(i);
        data.coefficients.emplace_back(r.begin(), r.end());
    }
    return data;
}

ValidationReport validate_system(const PolynomialSystem& sys)
{
    ValidationReport report;
    std::vector<bool> live(sys.num_monomials(), true);
    add_pure_power_warnings(sys.variables(), sys.monomials(), live, report.warnings);
    return report;
}

SolutionState::SolutionState(std::vector<double> x) : x_(std::move(x))
{
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !(x_[i] > 0.0)) {
            throw DomainError("solution entry " + std::to_string(i) + " must be finite and strictly positive");
        }
    }
}

double SolutionState::min() const
{
    return x_.empty() ? 0.0 : *std::min_element(x_.begin(), x_.end());
}

double evaluate_monomial(std::span<const double> x, std::span<const double> alpha)
{
    bool integral = true;
    for (double a : alpha) integral = integral && a == std::floor(a) && a <= 64.0;
    if (integral) {
        double value = 1.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] != 0.0) value *= std::pow(x[i], static_cast<int>(alpha[i]));
        }
        return value;
    }
    double log_value = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] != 0.0) log_value += alpha[i] * std::log(x[i]);
    }
    return std::exp(log_value);
}

std::vector<double> evaluate_monomials(const PolynomialSystem& sys, std::span<const double> x)
{
    std::vector<double> values(sys.num_monomials());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = evaluate_monomial(x, sys.monomials()[k]);
    return values;
}

std::vector<double> equation_values(const PolynomialSystem& sys, std::span<const double> monomial_values)
{
    std::vector<double> p(sys.num_equations(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto r = sys.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) p[i] += r[k] * monomial_values[k];
    }
    return p;
}

ResidualReport evaluate_system(const PolynomialSystem& sys, const SolutionState& x)
{
    if (x.size() != sys.num_variables()) {
        throw DimensionError("point has " + std::to_string(x.size()) + " entries, system has " +
                             std::to_string(sys.num_variables()) + " variables");
    }
    ResidualReport report;
    report.lhs = equation_values(sys, evaluate_monomials(sys, x.values()));
    report.rhs = sys.rhs();
    for (std::size_t i = 0; i < report.lhs.size(); ++i) {
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(report.lhs[i] - report.rhs[i]));
    }
    report.divergence = gen_kl(report.lhs, report.rhs);
    return report;
}

}  // namespace klsolve
