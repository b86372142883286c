#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "klsolve/error.hpp"
#include "klsolve/transforms.hpp"

using namespace klsolve;
using namespace klsolve::testing;

namespace {

// x^2 - y = 0
GeneralPolynomialSystem parabola()
{
    return {{"x", "y"}, {{2, 0}, {0, 1}}, {{1, -1}}};
}

// Random signed system of `rows` equations in n variables (degree <= 2) with a
// planted positive root: the constant term of each row is chosen to cancel.
struct PlantedGeneral {
    GeneralPolynomialSystem gsys;
    std::vector<double> root;
};

PlantedGeneral random_general(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> coord(0.5, 2.0);
    PlantedGeneral out;
    for (std::size_t i = 0; i < n; ++i) out.gsys.variables.push_back("v" + std::to_string(i));
    out.gsys.monomials.push_back(std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> lin(n, 0), sq(n, 0);
        lin[i] = 1;
        sq[i] = 2;
        out.gsys.monomials.push_back(lin);
        out.gsys.monomials.push_back(sq);
    }
    if (n > 1) {
        std::vector<int> cross(n, 0);
        cross[0] = cross[1] = 1;
        out.gsys.monomials.push_back(cross);
    }
    for (std::size_t i = 0; i < n; ++i) out.root.push_back(coord(rng));
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> row(out.gsys.monomials.size());
        double value = 0.0;
        for (std::size_t k = 1; k < row.size(); ++k) {
            row[k] = coeff(rng);
            ExponentVector alpha(out.gsys.monomials[k].begin(), out.gsys.monomials[k].end());
            value += row[k] * evaluate_monomial(out.root, alpha);
        }
        row[0] = -value;
        out.gsys.coefficients.push_back(std::move(row));
    }
    return out;
}

}  // namespace

TEST_CASE("homogenize_positivize on a parabola")
{
    auto t = homogenize_positivize(parabola());
    const auto& sys = t.system;
    CHECK(sys.variables() == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(sys.monomials() == std::vector<ExponentVector>{{0, 1, 1}, {2, 0, 0}});
    CHECK(sys.coefficient(0, 0) == 1.0);  // yz
    CHECK(sys.coefficient(0, 1) == 3.0);  // x^2
    CHECK(sys.rhs()[0] == 2.0);
    CHECK(sys.coefficient(1, 0) == 1.0);
    CHECK(sys.coefficient(1, 1) == 1.0);
    CHECK(sys.rhs()[1] == 1.0);
    CHECK(t.certificate.degree == 2);
    CHECK(t.certificate.shifts == std::vector<double>{2.0});
    CHECK_FALSE(t.certificate.added_pure_power);
    CHECK(t.certificate.condition_estimate > 1.0);

    auto mapped = map_to_transformed(parabola(), t.certificate, std::vector<double>{1.0, 1.0});
    for (double v : mapped) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    auto r = evaluate_system(sys, SolutionState(mapped));
    CHECK(r.max_abs_residual <= 1e-15);

    auto back = map_back(t.certificate, mapped);
    CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(back[1] == doctest::Approx(1.0).epsilon(1e-15));

    auto detected = detect_degree_structure(sys);
    REQUIRE(detected);
    CHECK(detected.found->structure.rows() == 1);
    CHECK(detected.found->structure.d == std::vector<double>{2});
}

TEST_CASE("homogenize_positivize edge cases")
{
    SUBCASE("positive input still gains the normalization row")
    {
        GeneralPolynomialSystem g{{"x"}, {{2}, {0}}, {{1, 3}}};
        auto t = homogenize_positivize(g);
        CHECK(t.system.num_equations() == 2);
        CHECK(t.system.num_variables() == 2);
    }
    SUBCASE("homogeneous input gets a pure power of the new variable")
    {
        GeneralPolynomialSystem g{{"x", "y"}, {{1, 0}, {0, 1}}, {{1, -2}}};
        auto t = homogenize_positivize(g);
        CHECK(t.certificate.added_pure_power);
        CHECK(validate_system(t.system.to_data()).ok());
        auto mapped = map_to_transformed(g, t.certificate, std::vector<double>{2.0, 1.0});
        CHECK(evaluate_system(t.system, SolutionState(mapped)).max_abs_residual <= 1e-14);
    }
    SUBCASE("name clash")
    {
        GeneralPolynomialSystem g{{"z"}, {{1}, {0}}, {{1, -1}}};
        CHECK(homogenize_positivize(g).certificate.homogenizing_name == "z1");
    }
    SUBCASE("invalid input")
    {
        CHECK_THROWS_AS(homogenize_positivize({{"x"}, {{1}}, {{0}}}), InputError);
        CHECK_THROWS_AS(homogenize_positivize({{"x"}, {{-1}}, {{1}}}), InputError);
        CHECK_THROWS_AS(homogenize_positivize({{"x", "y"}, {{1, 0}}, {{1}}}), InputError);
        CHECK_THROWS_AS(homogenize_positivize({{"x"}, {{1}}, {{1, 2}}}), DimensionError);
    }
}

TEST_CASE("root correspondence on random general systems")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        auto planted = random_general(rng, 1 + trial % 3);
        auto t = homogenize_positivize(planted.gsys);
        CHECK(validate_system(t.system.to_data()).ok());
        auto detected = detect_degree_structure(t.system);
        REQUIRE(detected);
        CHECK(detected.found->structure.rows() == 1);

        auto mapped = map_to_transformed(planted.gsys, t.certificate, planted.root);
        auto r = evaluate_system(t.system, SolutionState(mapped));
        for (std::size_t i = 0; i < r.lhs.size(); ++i) CHECK(std::abs(r.lhs[i] - r.rhs[i]) <= 1e-9 * r.rhs[i]);
        auto back = map_back(t.certificate, mapped);
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(std::abs(back[i] - planted.root[i]) <= 1e-9 * planted.root[i]);
        }
    }
}

TEST_CASE("binomial")
{
    CHECK(binomial(2, 1) == 2);
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(6, 3) == 20);
}

TEST_CASE("generate_bilinear_instance")
{
    for (int m = 2; m <= 4; ++m) {
        CAPTURE(m);
        auto inst = generate_bilinear_instance(m, 100 + m);
        const auto mm = static_cast<std::size_t>(m);
        CHECK(inst.system.num_variables() == 2 * mm);
        CHECK(inst.system.num_equations() == 2 * mm);
        CHECK(inst.expected_count == binomial(2 * mm - 2, mm - 1));
        REQUIRE(inst.oracle_solutions.size() == inst.expected_count);
        CHECK(verify_degree_structure(inst.system, inst.structure).ok());

        for (std::size_t p = 0; p < inst.oracle_solutions.size(); ++p) {
            const auto& sol = inst.oracle_solutions[p];
            for (double v : sol) CHECK(v > 0.0);
            CHECK(evaluate_system(inst.system, SolutionState(sol)).max_abs_residual <= 1e-9);

            // Independent check against the linear forms: m-1 forms vanish on x,
            // the other m-1 vanish on y.
            std::size_t zero_on_x = 0, zero_on_y = 0;
            for (const auto& form : inst.linear_forms) {
                double bx = 0.0, by = 0.0;
                for (std::size_t i = 0; i < mm; ++i) {
                    bx += form[i] * sol[i];
                    by += form[i] * sol[mm + i];
                }
                zero_on_x += std::abs(bx) <= 1e-10;
                zero_on_y += std::abs(by) <= 1e-10;
            }
            CHECK(zero_on_x == mm - 1);
            CHECK(zero_on_y == mm - 1);

            for (std::size_t q = p + 1; q < inst.oracle_solutions.size(); ++q) {
                CHECK(relative_distance(sol, inst.oracle_solutions[q]) > 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(generate_bilinear_instance(1, 0), InputError);
    CHECK_THROWS_AS(generate_bilinear_instance(5, 0), InputError);

    auto a = generate_bilinear_instance(3, 77);
    auto b = generate_bilinear_instance(3, 77);
    CHECK(a.system.to_data().coefficients == b.system.to_data().coefficients);
}

TEST_CASE("plant_solution")
{
    auto square = plant_solution({"x"}, {{2}}, {{1}}, SolutionState({2.0}));
    CHECK(square.system.rhs() == std::vector<double>{4.0});

    auto product = plant_solution({"x", "y"}, {{1, 1}, {1, 0}, {0, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                  SolutionState({2.0, 3.0}));
    CHECK(product.system.rhs() == std::vector<double>{6.0, 2.0, 3.0});
    CHECK(evaluate_system(product.system, product.solution).divergence == 0.0);

    CHECK_THROWS_AS(plant_solution(1, {{1}, {2}}, 0), InputError);
}
