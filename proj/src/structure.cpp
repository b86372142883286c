#include "klsolve/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "klsolve/error.hpp"

namespace klsolve {

namespace {

constexpr double kStructureTol = 1e-9;

bool is_constant(const ExponentVector& alpha)
{
    return std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == 0.0; });
}

double total_degree(const ExponentVector& alpha)
{
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

std::optional<DetectedStructure> detect_homogeneous(const PolynomialSystem& sys)
{
    std::optional<double> degree;
    for (const auto& alpha : sys.monomials()) {
        if (is_constant(alpha)) continue;
        double deg = total_degree(alpha);
        if (!degree) {
            degree = deg;
        } else if (std::abs(deg - *degree) > kStructureTol * *degree) {
            return std::nullopt;
        }
    }
    if (!degree) return std::nullopt;
    DetectedStructure found;
    found.kind = StructureKind::homogeneous;
    found.structure.g.assign(1, std::vector<double>(sys.num_variables(), 1.0));
    found.structure.d = {*degree};
    found.groups.emplace_back(sys.num_variables());
    std::iota(found.groups[0].begin(), found.groups[0].end(), 0);
    return found;
}

std::optional<DetectedStructure> detect_multilinear(const PolynomialSystem& sys)
{
    const std::size_t n = sys.num_variables();
    for (const auto& alpha : sys.monomials()) {
        for (double a : alpha) {
            if (a != 0.0 && a != 1.0) return std::nullopt;
        }
    }

    std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
    for (const auto& alpha : sys.monomials()) {
        for (std::size_t u = 0; u < n; ++u) {
            if (alpha[u] == 0.0) continue;
            for (std::size_t v = u + 1; v < n; ++v) {
                if (alpha[v] != 0.0) adjacent[u][v] = adjacent[v][u] = true;
            }
        }
    }
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t u = 0; u < n; ++u) degree[u] = std::count(adjacent[u].begin(), adjacent[u].end(), true);

    // Largest degree first, ties by index.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return degree[l] > degree[r]; });

    constexpr std::size_t uncolored = static_cast<std::size_t>(-1);
    std::vector<std::size_t> color(n, uncolored);
    std::size_t colors = 0;
    for (std::size_t u : order) {
        std::vector<bool> taken(colors + 1, false);
        for (std::size_t v = 0; v < n; ++v) {
            if (adjacent[u][v] && color[v] != uncolored) taken[color[v]] = true;
        }
        std::size_t c = 0;
        while (taken[c]) ++c;
        color[u] = c;
        colors = std::max(colors, c + 1);
    }

    DetectedStructure found;
    found.kind = StructureKind::multilinear;
    found.groups.resize(colors);
    for (std::size_t u = 0; u < n; ++u) found.groups[color[u]].push_back(u);
    for (const auto& group : found.groups) {
        std::vector<double> row(n, 0.0);
        for (std::size_t u : group) row[u] = 1.0;
        found.structure.g.push_back(std::move(row));
        found.structure.d.push_back(1.0);
    }
    if (!verify_degree_structure(sys, found.structure).ok()) return std::nullopt;
    return found;
}

}  // namespace

StructureCheck verify_degree_structure(const PolynomialSystem& sys, const DegreeStructure& ds)
{
    const std::size_t n = sys.num_variables();
    if (ds.g.size() != ds.d.size()) {
        throw DimensionError("degree structure has " + std::to_string(ds.g.size()) + " rows of g but " +
                             std::to_string(ds.d.size()) + " degrees");
    }
    for (std::size_t j = 0; j < ds.g.size(); ++j) {
        if (ds.g[j].size() != n) {
            throw DimensionError("row " + std::to_string(j) + " of g has " + std::to_string(ds.g[j].size()) +
                                 " entries, system has " + std::to_string(n) + " variables");
        }
    }

    StructureCheck check;
    if (ds.g.empty()) check.errors.push_back("degree structure has no rows");
    for (std::size_t j = 0; j < ds.g.size(); ++j) {
        if (!std::isfinite(ds.d[j]) || !(ds.d[j] > 0.0)) {
            check.errors.push_back("degree d[" + std::to_string(j) + "] must be positive");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(ds.g[j][i]) || ds.g[j][i] < 0.0) {
                check.errors.push_back("g[" + std::to_string(j) + "][" + std::to_string(i) + "] must be non-negative");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool nonzero = std::any_of(ds.g.begin(), ds.g.end(), [i](const auto& row) { return row[i] > 0.0; });
        if (!nonzero) check.errors.push_back("column " + std::to_string(i) + " of g is identically zero");
    }
    if (!check.errors.empty()) return check;

    for (std::size_t j = 0; j < ds.g.size(); ++j) {
        const double dj = ds.d[j];
        for (std::size_t k = 0; k < sys.num_monomials(); ++k) {
            const auto& alpha = sys.monomials()[k];
            double value = 0.0;
            for (std::size_t i = 0; i < n; ++i) value += ds.g[j][i] * alpha[i];
            const double tol = kStructureTol * std::max(1.0, dj);
            if (std::abs(value) <= tol || std::abs(value - dj) <= tol) continue;
            StructureViolation v;
            v.row = j;
            v.monomial = k;
            v.value = value;
            v.message = "row " + std::to_string(j) + ", monomial " + std::to_string(k) + ": weighted degree " +
                        std::to_string(value) + " is neither 0 nor " + std::to_string(dj);
            check.violations.push_back(std::move(v));
        }
    }
    return check;
}

DetectionResult detect_degree_structure(const PolynomialSystem& sys)
{
    DetectionResult result;
    if (auto h = detect_homogeneous(sys)) {
        result.found = std::move(h);
        return result;
    }
    if (auto ml = detect_multilinear(sys)) {
        result.found = std::move(ml);
        return result;
    }
    result.not_found.message =
        "no degree structure found: monomials neither share one total degree nor form a multilinear "
        "system; supply \"degree_structure\" explicitly or homogenize the system with `klsolve transform`";
    return result;
}

const char* to_string(StructureKind kind)
{
    switch (kind) {
        case StructureKind::homogeneous: return "homogeneous";
        case StructureKind::multilinear: return "multilinear";
    }
    return "unknown";
}

}  // namespace klsolve
