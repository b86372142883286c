#include "klsolve/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "klsolve/error.hpp"

namespace klsolve {

namespace {

using InJson = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

InJson parse_text(const std::string& text)
{
    try {
        return InJson::parse(text);
    } catch (const InJson::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

const InJson& member(const InJson& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing required key");
    return *it;
}

const InJson& expect_array(const InJson& j, const std::string& path)
{
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

double expect_number(const InJson& j, const std::string& path)
{
    if (!j.is_number()) fail(path, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "number must be finite");
    return v;
}

std::vector<double> number_array(const InJson& j, const std::string& path)
{
    expect_array(j, path);
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expect_number(j[i], path + "/" + std::to_string(i)));
    return out;
}

void reject_unknown_keys(const InJson& root, const std::set<std::string>& allowed)
{
    for (const auto& item : root.items()) {
        if (!allowed.count(item.key())) fail("/" + item.key(), "unknown key");
    }
}

std::vector<std::string> parse_variables(const InJson& root)
{
    const auto& vars = expect_array(member(root, "", "variables"), "/variables");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].is_string()) fail("/variables/" + std::to_string(i), "expected a string");
        names.push_back(vars[i].get<std::string>());
    }
    return names;
}

// Shared shape checks for monomials and equation rows.
struct RawRows {
    std::vector<std::vector<double>> monomials;
    std::vector<std::vector<double>> coefficients;
    std::vector<std::optional<double>> rhs;
};

RawRows parse_rows(const InJson& root, std::size_t n)
{
    RawRows raw;
    const auto& monomials = expect_array(member(root, "", "monomials"), "/monomials");
    for (std::size_t k = 0; k < monomials.size(); ++k) {
        const std::string path = "/monomials/" + std::to_string(k);
        auto alpha = number_array(monomials[k], path);
        if (alpha.size() != n) {
            fail(path, "expected " + std::to_string(n) + " exponents, found " + std::to_string(alpha.size()));
        }
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] < 0.0) fail(path + "/" + std::to_string(i), "exponent must be non-negative");
        }
        raw.monomials.push_back(std::move(alpha));
    }

    const auto& equations = expect_array(member(root, "", "equations"), "/equations");
    for (std::size_t i = 0; i < equations.size(); ++i) {
        const std::string path = "/equations/" + std::to_string(i);
        const auto& eq = equations[i];
        if (!eq.is_object()) fail(path, "expected an object");
        for (const auto& item : eq.items()) {
            if (item.key() != "coefficients" && item.key() != "rhs") fail(path + "/" + item.key(), "unknown key");
        }
        auto coeffs = number_array(member(eq, path, "coefficients"), path + "/coefficients");
        if (coeffs.size() != raw.monomials.size()) {
            fail(path + "/coefficients", "expected " + std::to_string(raw.monomials.size()) + " coefficients, found " +
                                             std::to_string(coeffs.size()));
        }
        raw.coefficients.push_back(std::move(coeffs));
        auto it = eq.find("rhs");
        raw.rhs.push_back(it == eq.end() ? std::nullopt : std::optional<double>(expect_number(*it, path + "/rhs")));
    }
    return raw;
}

DegreeStructure parse_degree_structure(const InJson& j, std::size_t n)
{
    const std::string path = "/degree_structure";
    if (!j.is_object()) fail(path, "expected an object");
    DegreeStructure ds;
    const auto& g = expect_array(member(j, path, "g"), path + "/g");
    for (std::size_t r = 0; r < g.size(); ++r) {
        const std::string row_path = path + "/g/" + std::to_string(r);
        auto row = number_array(g[r], row_path);
        if (row.size() != n) fail(row_path, "expected " + std::to_string(n) + " entries");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] < 0.0) fail(row_path + "/" + std::to_string(i), "entries of g must be non-negative");
        }
        ds.g.push_back(std::move(row));
    }
    ds.d = number_array(member(j, path, "d"), path + "/d");
    if (ds.d.size() != ds.g.size()) fail(path + "/d", "expected one degree per row of g");
    for (std::size_t r = 0; r < ds.d.size(); ++r) {
        if (!(ds.d[r] > 0.0)) fail(path + "/d/" + std::to_string(r), "degree must be positive");
    }
    return ds;
}

Json numbers(const std::vector<double>& v)
{
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

Json named_point(const PolynomialSystem& sys, const SolutionState& x)
{
    Json obj = Json::object();
    for (std::size_t i = 0; i < sys.num_variables(); ++i) obj[sys.variables()[i]] = x[i];
    return obj;
}

// JSON has no infinity; unbounded values are written as null.
Json finite_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

}  // namespace

SystemFile parse_system_file(const std::string& text)
{
    const auto root = parse_text(text);
    if (!root.is_object()) fail("", "expected a JSON object");
    reject_unknown_keys(root, {"variables", "monomials", "equations", "degree_structure", "note", "certificate",
                               "expected_solutions"});

    SystemData data;
    data.variables = parse_variables(root);
    auto raw = parse_rows(root, data.variables.size());
    for (std::size_t i = 0; i < raw.coefficients.size(); ++i) {
        const std::string path = "/equations/" + std::to_string(i);
        for (std::size_t k = 0; k < raw.coefficients[i].size(); ++k) {
            if (raw.coefficients[i][k] < 0.0) {
                fail(path + "/coefficients/" + std::to_string(k), "coefficient must be non-negative");
            }
        }
        if (!raw.rhs[i]) fail(path + "/rhs", "missing required key");
        if (!(*raw.rhs[i] > 0.0)) fail(path + "/rhs", "rhs must be strictly positive");
    }
    data.monomials = std::move(raw.monomials);
    data.coefficients = std::move(raw.coefficients);
    for (const auto& b : raw.rhs) data.rhs.push_back(*b);

    SystemFile file{PolynomialSystem::from_data(std::move(data)), std::nullopt, {}};
    if (auto it = root.find("degree_structure"); it != root.end()) {
        file.degree_structure = parse_degree_structure(*it, file.system.num_variables());
    }
    if (auto it = root.find("note"); it != root.end()) {
        if (!it->is_string()) fail("/note", "expected a string");
        file.note = it->get<std::string>();
    }
    return file;
}

GeneralPolynomialSystem parse_general_system_file(const std::string& text)
{
    const auto root = parse_text(text);
    if (!root.is_object()) fail("", "expected a JSON object");
    reject_unknown_keys(root, {"variables", "monomials", "equations", "note"});

    GeneralPolynomialSystem gsys;
    gsys.variables = parse_variables(root);
    auto raw = parse_rows(root, gsys.variables.size());
    for (std::size_t k = 0; k < raw.monomials.size(); ++k) {
        std::vector<int> alpha;
        for (std::size_t i = 0; i < raw.monomials[k].size(); ++i) {
            double e = raw.monomials[k][i];
            if (e != std::floor(e) || e > 1000.0) {
                fail("/monomials/" + std::to_string(k) + "/" + std::to_string(i), "exponent must be an integer");
            }
            alpha.push_back(static_cast<int>(e));
        }
        gsys.monomials.push_back(std::move(alpha));
    }
    for (std::size_t i = 0; i < raw.rhs.size(); ++i) {
        if (raw.rhs[i] && *raw.rhs[i] != 0.0) {
            fail("/equations/" + std::to_string(i) + "/rhs", "general systems are written with rhs 0");
        }
        const auto& row = raw.coefficients[i];
        if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
            fail("/equations/" + std::to_string(i) + "/coefficients", "equation is empty");
        }
    }
    gsys.coefficients = std::move(raw.coefficients);
    validate_general_system(gsys);
    return gsys;
}

Json system_to_json(const PolynomialSystem& sys, const std::optional<DegreeStructure>& ds, const std::string& note)
{
    Json out = Json::object();
    out["variables"] = sys.variables();
    Json monomials = Json::array();
    for (const auto& alpha : sys.monomials()) monomials.push_back(numbers(alpha));
    out["monomials"] = std::move(monomials);
    Json equations = Json::array();
    for (std::size_t i = 0; i < sys.num_equations(); ++i) {
        auto r = sys.row(i);
        Json eq = Json::object();
        eq["coefficients"] = numbers(std::vector<double>(r.begin(), r.end()));
        eq["rhs"] = sys.rhs()[i];
        equations.push_back(std::move(eq));
    }
    out["equations"] = std::move(equations);
    if (ds) {
        Json g = Json::array();
        for (const auto& row : ds->g) g.push_back(numbers(row));
        out["degree_structure"] = Json{{"g", std::move(g)}, {"d", numbers(ds->d)}};
    }
    if (!note.empty()) out["note"] = note;
    return out;
}

Json certificate_to_json(const TransformCertificate& cert)
{
    Json out = Json::object();
    out["degree"] = cert.degree;
    out["shifts"] = numbers(cert.shifts);
    out["homogenizing_variable"] = cert.homogenizing_name;
    out["back_map"] = "x_i = x'_i / " + cert.homogenizing_name;
    out["added_pure_power"] = cert.added_pure_power;
    out["condition_estimate"] = finite_or_null(cert.condition_estimate);
    return out;
}

Json report_to_json(const PolynomialSystem& sys, const MultiStartResult& result, const ReportOptions& options)
{
    const auto& best = result.reports.front();
    const auto residual = evaluate_system(sys, best.x_final);

    Json out = Json::object();
    out["status"] = to_string(best.status);
    out["x"] = named_point(sys, best.x_final);
    out["divergence"] = best.divergence_final;
    out["gradient_residual"] = best.gradient_residual;
    Json residuals = Json::array();
    for (std::size_t i = 0; i < residual.lhs.size(); ++i) residuals.push_back(residual.lhs[i] - residual.rhs[i]);
    out["residuals"] = std::move(residuals);
    out["iterations"] = Json{{"outer", best.outer_iterations}, {"inner_total", best.total_inner_iterations}};
    if (options.include_trace) out["trace"] = numbers(best.divergence_trace);

    Json solutions = Json::array();
    for (const auto& cluster : result.solutions) {
        Json s = Json::object();
        s["x"] = named_point(sys, cluster.x);
        s["divergence"] = cluster.divergence;
        s["status"] = to_string(cluster.status);
        s["restarts"] = cluster.members.size();
        solutions.push_back(std::move(s));
    }
    out["solutions"] = std::move(solutions);

    Json summaries = Json::array();
    for (std::size_t r = 0; r < result.reports.size(); ++r) {
        const auto& rep = result.reports[r];
        Json s = Json::object();
        s["restart"] = result.restart_index[r];
        s["seed"] = rep.seed;
        s["status"] = to_string(rep.status);
        s["divergence"] = rep.divergence_final;
        s["outer"] = rep.outer_iterations;
        s["inner_total"] = rep.total_inner_iterations;
        summaries.push_back(std::move(s));
    }
    out["restart_summaries"] = std::move(summaries);
    return out;
}

std::string to_text(const Json& json)
{
    return json.dump(2) + "\n";
}

}  // namespace klsolve
