#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "klsolve/model.hpp"
#include "klsolve/solver.hpp"
#include "klsolve/structure.hpp"
#include "klsolve/transforms.hpp"

namespace klsolve {

using Json = nlohmann::ordered_json;

struct SystemFile {
    PolynomialSystem system;
    std::optional<DegreeStructure> degree_structure;
    std::string note;
};

// Parses the system file format:
//
//   {
//     "variables": ["x", "y"],
//     "monomials": [[1, 1], [1, 0], [0, 1]],
//     "equations": [{"coefficients": [1, 0, 0], "rhs": 6}, ...],
//     "degree_structure": {"g": [[1, 0], [0, 1]], "d": [1, 1]},   // optional
//     "note": "free text"                                          // optional
//   }
//
// "certificate" and "expected_solutions" blocks written by the transform and
// generate commands are accepted and ignored. Throws InputError whose message
// starts with the JSON pointer of the offending value.
SystemFile parse_system_file(const std::string& text);

// Same layout with signed coefficients and integer exponents; "rhs" may be
// omitted and must otherwise be 0.
GeneralPolynomialSystem parse_general_system_file(const std::string& text);

Json system_to_json(const PolynomialSystem& sys, const std::optional<DegreeStructure>& ds = std::nullopt,
                    const std::string& note = {});

Json certificate_to_json(const TransformCertificate& cert);

struct ReportOptions {
    bool include_trace = false;
};

Json report_to_json(const PolynomialSystem& sys, const MultiStartResult& result, const ReportOptions& options);

// Two-space indented dump with a trailing newline.
std::string to_text(const Json& json);

}  // namespace klsolve
