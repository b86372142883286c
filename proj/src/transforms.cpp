#include "klsolve/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "klsolve/error.hpp"

namespace klsolve {

namespace {

int total_degree(const std::vector<int>& alpha)
{
    return std::accumulate(alpha.begin(), alpha.end(), 0);
}

bool column_is_zero(const GeneralPolynomialSystem& gsys, std::size_t k)
{
    return std::all_of(gsys.coefficients.begin(), gsys.coefficients.end(),
                       [k](const auto& row) { return row[k] == 0.0; });
}

std::string fresh_name(const std::vector<std::string>& taken)
{
    std::set<std::string> names(taken.begin(), taken.end());
    if (!names.count("z")) return "z";
    for (int suffix = 1;; ++suffix) {
        std::string candidate = "z" + std::to_string(suffix);
        if (!names.count(candidate)) return candidate;
    }
}

// Homogenized exponent set: live input monomials, plus z^d when needed.
struct HomogenizedSupport {
    std::vector<std::size_t> columns;  // input monomial index per output monomial
    int degree = 0;
    bool added_pure_power = false;
};

HomogenizedSupport homogenized_support(const GeneralPolynomialSystem& gsys)
{
    HomogenizedSupport support;
    for (std::size_t k = 0; k < gsys.monomials.size(); ++k) {
        if (column_is_zero(gsys, k)) continue;
        support.columns.push_back(k);
        support.degree = std::max(support.degree, total_degree(gsys.monomials[k]));
    }
    support.added_pure_power = std::none_of(support.columns.begin(), support.columns.end(), [&](std::size_t k) {
        return total_degree(gsys.monomials[k]) < support.degree;
    });
    return support;
}

double condition_number(const std::vector<std::vector<double>>& rows)
{
    Eigen::MatrixXd mat(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].size(); ++k) mat(i, k) = rows[i][k];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

// Calls f on every k-subset of {0..n-1}, in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f)
{
    std::vector<std::size_t> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        f(subset);
        std::size_t pos = k;
        while (pos > 0 && subset[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) return;
        ++subset[pos - 1];
        for (std::size_t q = pos; q < k; ++q) subset[q] = subset[q - 1] + 1;
    }
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& mat, const std::vector<std::size_t>& rows)
{
    Eigen::MatrixXd out(rows.size(), mat.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = mat.row(rows[r]);
    return out;
}

Eigen::MatrixXd normalize_rows(Eigen::MatrixXd mat)
{
    for (Eigen::Index r = 0; r < mat.rows(); ++r) mat.row(r) /= mat.row(r).norm();
    return mat;
}

// Unit kernel vector of an (m-1) x m matrix of full rank.
Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& forms)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(forms, Eigen::ComputeFullV);
    return svd.matrixV().col(forms.cols() - 1);
}

struct BilinearAttempt {
    Eigen::MatrixXd forms;                    // (2m-2) x m, after the coordinate change
    std::vector<Eigen::VectorXd> points;      // per (m-1)-subset, positive, summing to 1
    std::vector<std::vector<std::size_t>> subsets;
};

std::optional<BilinearAttempt> try_bilinear(int m, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t forms_count = static_cast<std::size_t>(2 * m - 2);
    const auto mm = static_cast<std::size_t>(m);

    Eigen::MatrixXd forms(forms_count, m);
    for (Eigen::Index r = 0; r < forms.rows(); ++r) {
        for (Eigen::Index c = 0; c < forms.cols(); ++c) forms(r, c) = normal(rng);
    }

    // Any m of the forms must have only the trivial common zero.
    bool generic = true;
    for_each_subset(forms_count, mm, [&](const std::vector<std::size_t>& rows) {
        if (std::abs(normalize_rows(select_rows(forms, rows)).determinant()) <= 1e-8) generic = false;
    });
    if (!generic) return std::nullopt;

    BilinearAttempt attempt;
    std::vector<Eigen::VectorXd> kernels;
    for_each_subset(forms_count, mm - 1, [&](const std::vector<std::size_t>& rows) {
        attempt.subsets.push_back(rows);
        kernels.push_back(kernel_vector(select_rows(forms, rows)));
    });

    // Orient every kernel line into the half-space c.v > 0 and normalize to c.v = 1.
    Eigen::VectorXd c(m);
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
    c.normalize();
    std::vector<Eigen::VectorXd> oriented;
    for (const auto& v : kernels) {
        const double dot = c.dot(v);
        if (std::abs(dot) < 1e-3) return std::nullopt;
        oriented.push_back(v / dot);
    }

    // T = K 1 c^T + R sends every oriented point to K 1 + R v. K is the
    // smallest lift making all of them positive plus a margin, which keeps the
    // solutions well apart; a larger lift crowds them around the centroid.
    Eigen::MatrixXd noise(m, m);
    for (Eigen::Index r = 0; r < noise.rows(); ++r) {
        for (Eigen::Index col = 0; col < noise.cols(); ++col) noise(r, col) = normal(rng);
    }
    double spread = 0.0, deficit = 0.0;
    for (const auto& v : oriented) {
        const Eigen::VectorXd rv = noise * v;
        spread = std::max(spread, rv.cwiseAbs().maxCoeff());
        deficit = std::max(deficit, -rv.minCoeff());
    }
    const double lift = deficit + 0.25 * spread + 1e-3;
    const Eigen::MatrixXd change = lift * Eigen::VectorXd::Ones(m) * c.transpose() + noise;
    if (std::abs(normalize_rows(change).determinant()) <= 1e-8) return std::nullopt;

    attempt.forms = forms * change.inverse();
    for (Eigen::Index r = 0; r < attempt.forms.rows(); ++r) {
        attempt.forms.row(r) /= attempt.forms.row(r).cwiseAbs().maxCoeff();
    }
    for (const auto& v : oriented) {
        Eigen::VectorXd p = change * v;
        if (p.minCoeff() <= 0.0) return std::nullopt;
        attempt.points.push_back(p / p.sum());
    }
    return attempt;
}

std::optional<BilinearInstance> build_bilinear(const BilinearAttempt& attempt, std::size_t mm)
{
    const int m = static_cast<int>(mm);
    BilinearInstance inst;
    inst.expected_count = binomial(2 * mm - 2, mm - 1);
    const std::size_t forms_count = 2 * mm - 2;

    // Solution for subset A: x on the forms in A, y on the complement.
    for (const auto& subset : attempt.subsets) {
        std::vector<bool> in_a(forms_count, false);
        for (std::size_t k : subset) in_a[k] = true;
        std::vector<std::size_t> complement;
        for (std::size_t k = 0; k < forms_count; ++k) {
            if (!in_a[k]) complement.push_back(k);
        }
        auto it = std::find(attempt.subsets.begin(), attempt.subsets.end(), complement);
        const auto& px = attempt.points[&subset - attempt.subsets.data()];
        const auto& py = attempt.points[static_cast<std::size_t>(it - attempt.subsets.begin())];
        std::vector<double> sol(px.data(), px.data() + mm);
        sol.insert(sol.end(), py.data(), py.data() + mm);
        inst.oracle_solutions.push_back(std::move(sol));
    }

    bool distinct = true;
    for (std::size_t p = 0; p < inst.oracle_solutions.size(); ++p) {
        for (std::size_t q = p + 1; q < inst.oracle_solutions.size(); ++q) {
            const auto& u = inst.oracle_solutions[p];
            const auto& v = inst.oracle_solutions[q];
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                diff = std::max(diff, std::abs(u[i] - v[i]));
                scale = std::max({scale, std::abs(u[i]), std::abs(v[i])});
            }
            if (diff <= 1e-6 * scale) distinct = false;
        }
    }
    if (!distinct) return std::nullopt;

    SystemData data;
    for (int i = 1; i <= m; ++i) data.variables.push_back("x" + std::to_string(i));
    for (int i = 1; i <= m; ++i) data.variables.push_back("y" + std::to_string(i));
    for (std::size_t i = 0; i < mm; ++i) {
        for (std::size_t j = 0; j < mm; ++j) {
            ExponentVector alpha(2 * mm, 0.0);
            alpha[i] = 1.0;
            alpha[mm + j] = 1.0;
            data.monomials.push_back(std::move(alpha));
        }
    }
    for (std::size_t i = 0; i < mm; ++i) {
        ExponentVector alpha(2 * mm, 0.0);
        alpha[i] = 1.0;
        data.monomials.push_back(std::move(alpha));
    }

    // b_k(x) b_k(y) plus shift_k times (sum x)(sum y) = 1.
    for (std::size_t k = 0; k < forms_count; ++k) {
        std::vector<double> row(data.monomials.size(), 0.0);
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mm; ++i) {
            for (std::size_t j = 0; j < mm; ++j) {
                row[i * mm + j] = attempt.forms(k, i) * attempt.forms(k, j);
                lowest = std::min(lowest, row[i * mm + j]);
            }
        }
        // A form vanishing at a positive point has mixed signs, so lowest < 0.
        const double shift = -lowest;
        for (std::size_t q = 0; q < mm * mm; ++q) row[q] += shift;
        data.coefficients.push_back(std::move(row));
        data.rhs.push_back(shift);
    }
    std::vector<double> product_row(data.monomials.size(), 0.0);
    std::fill(product_row.begin(), product_row.begin() + mm * mm, 1.0);
    data.coefficients.push_back(std::move(product_row));
    data.rhs.push_back(1.0);
    std::vector<double> linear_row(data.monomials.size(), 0.0);
    std::fill(linear_row.begin() + mm * mm, linear_row.end(), 1.0);
    data.coefficients.push_back(std::move(linear_row));
    data.rhs.push_back(1.0);

    inst.system = PolynomialSystem::from_data(std::move(data));
    inst.structure.g.assign(2, std::vector<double>(2 * mm, 0.0));
    for (std::size_t i = 0; i < mm; ++i) {
        inst.structure.g[0][i] = 1.0;
        inst.structure.g[1][mm + i] = 1.0;
    }
    inst.structure.d = {1.0, 1.0};

    bool satisfied = true;
    for (const auto& sol : inst.oracle_solutions) {
        auto residual = evaluate_system(inst.system, SolutionState(sol));
        if (residual.max_abs_residual > 1e-10) satisfied = false;
    }
    if (!satisfied) return std::nullopt;

    for (Eigen::Index r = 0; r < attempt.forms.rows(); ++r) {
        std::vector<double> form(static_cast<std::size_t>(attempt.forms.cols()));
        for (Eigen::Index c = 0; c < attempt.forms.cols(); ++c) form[static_cast<std::size_t>(c)] = attempt.forms(r, c);
        inst.linear_forms.push_back(std::move(form));
    }
    return inst;
}

// Smallest |b_k(p)| over subset points p and forms b_k not vanishing there,
// capped by the smallest coordinate. Small values mean some solution is
// barely pinned down, which makes the iteration crawl.
double bilinear_quality(const BilinearAttempt& attempt, std::size_t mm)
{
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < attempt.points.size(); ++p) {
        const auto& subset = attempt.subsets[p];
        for (Eigen::Index k = 0; k < attempt.forms.rows(); ++k) {
            if (std::find(subset.begin(), subset.end(), static_cast<std::size_t>(k)) != subset.end()) continue;
            q = std::min(q, std::abs(attempt.forms.row(k).dot(attempt.points[p])));
        }
        q = std::min(q, static_cast<double>(mm) * attempt.points[p].minCoeff());
    }
    return q;
}

}  // namespace

void validate_general_system(const GeneralPolynomialSystem& gsys)
{
    const std::size_t n = gsys.variables.size();
    const std::size_t s = gsys.monomials.size();
    if (n == 0) throw InputError("system has no variables");
    if (s == 0) throw InputError("system has no monomials");
    if (gsys.coefficients.empty()) throw InputError("system has no equations");
    std::set<std::string> names;
    for (const auto& name : gsys.variables) {
        if (name.empty() || !names.insert(name).second) throw InputError("variable names must be unique and non-empty");
    }
    for (std::size_t k = 0; k < s; ++k) {
        if (gsys.monomials[k].size() != n) {
            throw DimensionError("monomial " + std::to_string(k) + " has " +
                                 std::to_string(gsys.monomials[k].size()) + " exponents, expected " +
                                 std::to_string(n));
        }
        for (int e : gsys.monomials[k]) {
            if (e < 0) throw InputError("monomial " + std::to_string(k) + " has a negative exponent");
        }
    }
    for (std::size_t i = 0; i < gsys.coefficients.size(); ++i) {
        const auto& row = gsys.coefficients[i];
        if (row.size() != s) {
            throw DimensionError("equation " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                 " coefficients, expected " + std::to_string(s));
        }
        if (std::any_of(row.begin(), row.end(), [](double v) { return !std::isfinite(v); })) {
            throw InputError("equation " + std::to_string(i) + " has a non-finite coefficient");
        }
        if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
            throw InputError("equation " + std::to_string(i) + " is empty (all coefficients are zero)");
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        bool appears = false;
        for (std::size_t k = 0; k < s && !appears; ++k) {
            appears = gsys.monomials[k][v] > 0 && !column_is_zero(gsys, k);
        }
        if (!appears) throw InputError("variable '" + gsys.variables[v] + "' appears in no monomial");
    }
}

TransformedSystem homogenize_positivize(const GeneralPolynomialSystem& gsys)
{
    validate_general_system(gsys);
    const std::size_t n = gsys.variables.size();
    const std::size_t rows = gsys.coefficients.size();
    const auto support = homogenized_support(gsys);

    TransformCertificate cert;
    cert.degree = support.degree;
    cert.added_pure_power = support.added_pure_power;
    cert.homogenizing_variable = n;
    cert.homogenizing_name = fresh_name(gsys.variables);

    SystemData data;
    data.variables = gsys.variables;
    data.variables.push_back(cert.homogenizing_name);
    for (std::size_t k : support.columns) {
        ExponentVector alpha(gsys.monomials[k].begin(), gsys.monomials[k].end());
        alpha.push_back(static_cast<double>(support.degree - total_degree(gsys.monomials[k])));
        data.monomials.push_back(std::move(alpha));
    }
    if (support.added_pure_power) {
        ExponentVector alpha(n + 1, 0.0);
        alpha[n] = static_cast<double>(support.degree);
        data.monomials.push_back(std::move(alpha));
    }

    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row;
        for (std::size_t k : support.columns) row.push_back(gsys.coefficients[i][k]);
        if (support.added_pure_power) row.push_back(0.0);
        const double lowest = *std::min_element(row.begin(), row.end());
        const double shift = std::max(1.0, 2.0 * std::abs(lowest));
        for (double& v : row) v += shift;
        cert.shifts.push_back(shift);
        data.coefficients.push_back(std::move(row));
        data.rhs.push_back(shift);
    }
    data.coefficients.emplace_back(data.monomials.size(), 1.0);
    data.rhs.push_back(1.0);

    cert.condition_estimate = condition_number(data.coefficients);
    return {PolynomialSystem::from_data(std::move(data)), std::move(cert)};
}

std::vector<double> map_to_transformed(const GeneralPolynomialSystem& gsys, const TransformCertificate& cert,
                                       std::span<const double> x)
{
    if (x.size() != gsys.variables.size()) throw DimensionError("point does not match the input system");
    const auto support = homogenized_support(gsys);
    double total = support.added_pure_power ? 1.0 : 0.0;
    for (std::size_t k : support.columns) {
        ExponentVector alpha(gsys.monomials[k].begin(), gsys.monomials[k].end());
        total += evaluate_monomial(x, alpha);
    }
    const double scale = std::pow(total, 1.0 / cert.degree);
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v /= scale;
    out.push_back(1.0 / scale);
    return out;
}

std::vector<double> map_back(const TransformCertificate& cert, std::span<const double> transformed)
{
    if (transformed.size() != cert.homogenizing_variable + 1) {
        throw DimensionError("point does not match the transformed system");
    }
    const double z = transformed[cert.homogenizing_variable];
    std::vector<double> out(transformed.begin(), transformed.begin() + cert.homogenizing_variable);
    for (double& v : out) v /= z;
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BilinearInstance generate_bilinear_instance(int m, std::uint64_t seed)
{
    if (m < 2 || m > 4) throw InputError("bilinear instances are generated for 2 <= m <= 4");
    const auto mm = static_cast<std::size_t>(m);
    std::mt19937_64 rng(seed);

    // Keep the best conditioned of the first few valid candidates.
    constexpr int kCandidates = 16;
    std::optional<BilinearInstance> best;
    double best_quality = -1.0;
    int found = 0;
    for (int attempt_no = 0; attempt_no < 400 && found < kCandidates; ++attempt_no) {
        auto attempt = try_bilinear(m, rng);
        if (!attempt) continue;
        auto inst = build_bilinear(*attempt, mm);
        if (!inst) continue;
        ++found;
        const double quality = bilinear_quality(*attempt, mm);
        if (quality > best_quality) {
            best_quality = quality;
            best = std::move(inst);
        }
    }
    if (best) return std::move(*best);
    throw std::runtime_error("could not generate a generic bilinear instance within the retry budget");
}

PlantedSystem plant_solution(std::vector<std::string> variables, std::vector<ExponentVector> monomials,
                             std::vector<std::vector<double>> coefficients, SolutionState solution)
{
    if (solution.size() != variables.size()) throw DimensionError("planted point does not match the variables");
    SystemData data;
    data.variables = std::move(variables);
    data.monomials = std::move(monomials);
    for (const auto& alpha : data.monomials) {
        if (alpha.size() != solution.size()) throw DimensionError("monomial length does not match the variables");
    }
    for (const auto& row : coefficients) {
        if (row.size() != data.monomials.size()) throw DimensionError("coefficient row does not match the monomials");
        double b = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) b += row[k] * evaluate_monomial(solution.values(), data.monomials[k]);
        data.rhs.push_back(b);
    }
    data.coefficients = std::move(coefficients);
    return {PolynomialSystem::from_data(std::move(data)), std::move(solution)};
}

PlantedSystem plant_solution(std::size_t n, const std::vector<ExponentVector>& monomials, std::uint64_t seed,
                             std::size_t equations)
{
    if (equations == 0) equations = n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> point(0.5, 2.0);
    std::uniform_real_distribution<double> value(0.5, 1.5);
    std::bernoulli_distribution present(0.6);
    std::uniform_int_distribution<std::size_t> pick_column(0, monomials.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_row(0, equations - 1);

    std::vector<double> x(n);
    for (double& v : x) v = point(rng);

    std::vector<std::vector<double>> a(equations, std::vector<double>(monomials.size(), 0.0));
    for (auto& row : a) {
        for (double& v : row) v = present(rng) ? value(rng) : 0.0;
        if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) row[pick_column(rng)] = value(rng);
    }
    for (std::size_t k = 0; k < monomials.size(); ++k) {
        bool empty = std::all_of(a.begin(), a.end(), [k](const auto& row) { return row[k] == 0.0; });
        if (empty) a[pick_row(rng)][k] = value(rng);
    }

    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    auto planted = plant_solution(std::move(names), monomials, std::move(a), SolutionState(std::move(x)));
    if (!detect_degree_structure(planted.system)) {
        throw InputError("monomial set admits no detectable degree structure; homogenize it first");
    }
    return planted;
}

}  // namespace klsolve
