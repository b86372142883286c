#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klsolve/model.hpp"

namespace klsolve {

// Rows g_j and degrees d_j such that sum_i g_{ji} alpha_i is 0 or d_j for
// every monomial alpha, with no all-zero column in g.
struct DegreeStructure {
    std::vector<std::vector<double>> g;  // s rows of length n
    std::vector<double> d;               // s degrees

    std::size_t rows() const { return d.size(); }
};

struct StructureViolation {
    std::size_t row = 0;       // j
    std::size_t monomial = 0;  // index into sys.monomials()
    double value = 0.0;        // sum_i g_{ji} alpha_i
    std::string message;
};

struct StructureCheck {
    std::vector<StructureViolation> violations;
    std::vector<std::string> errors;  // sign, degree and zero-column problems

    bool ok() const { return violations.empty() && errors.empty(); }
};

// Throws DimensionError if g or d do not match the system shape.
StructureCheck verify_degree_structure(const PolynomialSystem& sys, const DegreeStructure& ds);

enum class StructureKind { homogeneous, multilinear };

struct DetectedStructure {
    DegreeStructure structure;
    StructureKind kind = StructureKind::homogeneous;
    // Variable indices per row for multilinear structures.
    std::vector<std::vector<std::size_t>> groups;
};

struct StructureNotFound {
    std::string message;
};

struct DetectionResult {
    std::optional<DetectedStructure> found;
    StructureNotFound not_found;

    explicit operator bool() const { return found.has_value(); }
};

// Tries a single all-ones row (all non-constant monomials share one total
// degree), then a 0/1 grouping from a greedy coloring of the variable
// co-occurrence graph. Constant monomials satisfy every row and are ignored.
DetectionResult detect_degree_structure(const PolynomialSystem& sys);

const char* to_string(StructureKind kind);

}  // namespace klsolve
