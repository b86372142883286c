#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "klsolve/error.hpp"
#include "klsolve/structure.hpp"

using namespace klsolve;
using namespace klsolve::testing;

namespace {

// One equation using every monomial; enough to exercise structure checks.
PolynomialSystem with_monomials(std::size_t n, std::vector<ExponentVector> monomials)
{
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
    std::vector<double> row(monomials.size(), 1.0);
    return make_system(vars, std::move(monomials), {row}, {1.0});
}

}  // namespace

TEST_CASE("verify_degree_structure")
{
    auto quadratic = with_monomials(2, {{2, 0}, {1, 1}, {0, 2}});
    CHECK(verify_degree_structure(quadratic, {{{1, 1}}, {2}}).ok());

    auto bilinear = with_monomials(2, {{1, 1}, {1, 0}, {0, 1}});
    CHECK(verify_degree_structure(bilinear, {{{1, 0}, {0, 1}}, {1, 1}}).ok());

    auto mixed = with_monomials(1, {{1}, {2}});
    auto check = verify_degree_structure(mixed, {{{1}}, {1}});
    REQUIRE(check.violations.size() == 1);
    CHECK(check.violations[0].row == 0);
    CHECK(mixed.monomials()[check.violations[0].monomial] == ExponentVector{2});
    CHECK(check.violations[0].value == 2.0);

    SUBCASE("shape and sign problems")
    {
        CHECK_THROWS_AS(verify_degree_structure(quadratic, {{{1, 1, 1}}, {2}}), DimensionError);
        CHECK_THROWS_AS(verify_degree_structure(quadratic, {{{1, 1}}, {2, 3}}), DimensionError);
        CHECK_FALSE(verify_degree_structure(bilinear, {{{1, 0}}, {1}}).ok());  // zero column
        CHECK_FALSE(verify_degree_structure(quadratic, {{{1, 1}}, {0}}).ok());
        CHECK_FALSE(verify_degree_structure(quadratic, {{{-1, 1}}, {2}}).ok());
    }
}

TEST_CASE("detect_degree_structure")
{
    SUBCASE("homogeneous cubic")
    {
        auto sys = with_monomials(2, {{3, 0}, {0, 3}});
        auto found = detect_degree_structure(sys);
        REQUIRE(found);
        CHECK(found.found->kind == StructureKind::homogeneous);
        CHECK(found.found->structure.g == std::vector<std::vector<double>>{{1, 1}});
        CHECK(found.found->structure.d == std::vector<double>{3});
    }
    SUBCASE("multilinear pair")
    {
        auto sys = with_monomials(2, {{1, 1}, {1, 0}, {0, 1}});
        auto found = detect_degree_structure(sys);
        REQUIRE(found);
        CHECK(found.found->kind == StructureKind::multilinear);
        CHECK(found.found->structure.g == std::vector<std::vector<double>>{{1, 0}, {0, 1}});
        CHECK(found.found->structure.d == std::vector<double>{1, 1});
    }
    SUBCASE("mixed degrees in one variable")
    {
        auto found = detect_degree_structure(with_monomials(1, {{1}, {2}}));
        CHECK_FALSE(found);
        CHECK(found.not_found.message.find("transform") != std::string::npos);
    }
    SUBCASE("constant monomials are ignored")
    {
        auto found = detect_degree_structure(with_monomials(2, {{0, 0}, {2, 0}, {0, 2}}));
        REQUIRE(found);
        CHECK(found.found->structure.d == std::vector<double>{2});
    }
}

TEST_CASE("detected structures verify and respect their invariants")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const bool homogeneous = trial % 2 == 0;
        auto monomials = homogeneous ? random_homogeneous_monomials(rng, n, 1 + trial % 3, n + 4)
                                     : random_multilinear_monomials(rng, n, 1 + trial % 3, n + 4);
        auto sys = with_monomials(n, monomials);
        auto found = detect_degree_structure(sys);
        REQUIRE(found);
        CHECK(verify_degree_structure(sys, found.found->structure).ok());
        if (homogeneous) CHECK(found.found->structure.rows() == 1);

        if (found.found->kind == StructureKind::multilinear) {
            // No monomial uses two variables of the same group.
            for (const auto& group : found.found->groups) {
                for (const auto& alpha : sys.monomials()) {
                    int hits = 0;
                    for (std::size_t v : group) hits += alpha[v] != 0.0;
                    CHECK(hits <= 1);
                }
            }
        }
    }
}
