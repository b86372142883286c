#include "klsolve/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "klsolve/error.hpp"
#include "klsolve/io.hpp"
#include "klsolve/solver.hpp"
#include "klsolve/structure.hpp"
#include "klsolve/transforms.hpp"

namespace klsolve::cli {

namespace {

CommandResult input_error(const std::string& message)
{
    return {kExitInputError, {}, "error: " + message + "\n"};
}

// Supplied structure if present (must verify), otherwise detection.
std::optional<DegreeStructure> resolve_structure(const SystemFile& file, std::string& error)
{
    if (file.degree_structure) {
        auto check = verify_degree_structure(file.system, *file.degree_structure);
        if (!check.ok()) {
            error = "supplied degree_structure does not fit the monomials:";
            for (const auto& e : check.errors) error += "\n  " + e;
            for (const auto& v : check.violations) error += "\n  " + v.message;
            return std::nullopt;
        }
        return file.degree_structure;
    }
    auto detected = detect_degree_structure(file.system);
    if (!detected) {
        error = detected.not_found.message;
        return std::nullopt;
    }
    return detected.found->structure;
}

std::string read_input(const std::string& path)
{
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("cannot open '" + path + "'");
        buffer << in.rdbuf();
    }
    return buffer.str();
}

int emit(const CommandResult& result)
{
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
}

unsigned threads_from_environment()
{
    const char* value = std::getenv("KLSOLVE_THREADS");
    if (value == nullptr || *value == '\0') return 0;
    char* end = nullptr;
    unsigned long parsed = std::strtoul(value, &end, 10);
    if (*end != '\0') throw InputError("KLSOLVE_THREADS must be a non-negative integer");
    return static_cast<unsigned>(parsed);
}

}  // namespace

CommandResult cmd_solve(const std::string& text, const SolveOptions& options)
{
    try {
        const auto file = parse_system_file(text);
        std::string error;
        auto ds = resolve_structure(file, error);
        if (!ds) return input_error(error);

        SolverConfig cfg;
        cfg.restarts = options.restarts;
        cfg.seed = options.seed;
        cfg.outer_tol = options.outer_tol;
        cfg.inner_tol = options.inner_tol;
        cfg.max_outer = options.max_outer;
        cfg.max_inner = options.max_inner;
        cfg.threads = options.threads;
        cfg.single_sweep = options.single_sweep;

        const auto result = multi_start(file.system, *ds, cfg);
        ReportOptions report_options;
        report_options.include_trace = options.trace;
        CommandResult out;
        out.out = to_text(report_to_json(file.system, result, report_options));

        const auto& best = result.reports.front();
        const bool solved = best.status == SolveStatus::critical_point &&
                            best.divergence_final <= cfg.outer_tol * file.system.rhs_total();
        out.exit_code = solved ? kExitSolved : kExitApproximate;
        return out;
    } catch (const InputError& e) {
        return input_error(e.what());
    }
}

CommandResult cmd_check(const std::string& text)
{
    try {
        const auto file = parse_system_file(text);
        const auto& sys = file.system;
        Json out = Json::object();
        Json warnings = Json::array();
        for (const auto& w : validate_system(sys).warnings) warnings.push_back(w);

        auto write_structure = [&](const DegreeStructure& ds) {
            Json g = Json::array();
            for (const auto& row : ds.g) g.push_back(row);
            out["g"] = std::move(g);
            out["d"] = ds.d;
        };

        if (file.degree_structure) {
            auto check = verify_degree_structure(sys, *file.degree_structure);
            if (!check.ok()) {
                std::string msg = "supplied degree_structure does not fit the monomials:";
                for (const auto& e : check.errors) msg += "\n  " + e;
                for (const auto& v : check.violations) msg += "\n  " + v.message;
                return input_error(msg);
            }
            out["source"] = "supplied";
            write_structure(*file.degree_structure);
        } else {
            auto detected = detect_degree_structure(sys);
            if (!detected) return input_error(detected.not_found.message);
            out["source"] = to_string(detected.found->kind);
            write_structure(detected.found->structure);
            Json groups = Json::array();
            for (const auto& group : detected.found->groups) {
                Json names = Json::array();
                for (std::size_t v : group) names.push_back(sys.variables()[v]);
                groups.push_back(std::move(names));
            }
            out["groups"] = std::move(groups);
        }
        out["warnings"] = std::move(warnings);
        return {kExitSolved, to_text(out), {}};
    } catch (const InputError& e) {
        return input_error(e.what());
    }
}

CommandResult cmd_transform(const std::string& text)
{
    try {
        const auto gsys = parse_general_system_file(text);
        const auto transformed = homogenize_positivize(gsys);
        Json out = system_to_json(transformed.system);
        out["certificate"] = certificate_to_json(transformed.certificate);
        return {kExitSolved, to_text(out), {}};
    } catch (const InputError& e) {
        return input_error(e.what());
    }
}

CommandResult cmd_generate(const std::string& kind, int m, std::uint64_t seed)
{
    if (kind != "bilinear") return input_error("unknown instance kind '" + kind + "' (expected 'bilinear')");
    try {
        const auto inst = generate_bilinear_instance(m, seed);
        Json out = system_to_json(inst.system, inst.structure,
                                  "expected_solutions=" + std::to_string(inst.expected_count));
        out["expected_solutions"] = inst.expected_count;
        return {kExitSolved, to_text(out), {}};
    } catch (const InputError& e) {
        return input_error(e.what());
    } catch (const std::runtime_error& e) {
        return {kExitInputError, {}, std::string("error: ") + e.what() + "\n"};
    }
}

int run(int argc, char** argv)
{
    CLI::App app{"klsolve: positive solutions of polynomial systems with non-negative coefficients"};
    app.require_subcommand(1);

    SolveOptions solve_options;
    std::string solve_path;
    auto* solve = app.add_subcommand("solve", "run the multi-start solver on a system file");
    solve->add_option("file", solve_path, "system file, or - for standard input")->required();
    solve->add_option("--restarts", solve_options.restarts, "number of random starts")->check(CLI::PositiveNumber);
    solve->add_option("--seed", solve_options.seed, "base seed; restart r uses seed XOR r");
    solve->add_option("--outer-tol", solve_options.outer_tol, "divergence decrease per outer iteration")
        ->check(CLI::PositiveNumber);
    solve->add_option("--inner-tol", solve_options.inner_tol, "relative change of x per inner sweep")
        ->check(CLI::PositiveNumber);
    solve->add_option("--max-outer", solve_options.max_outer, "outer iteration cap")->check(CLI::PositiveNumber);
    solve->add_option("--max-inner", solve_options.max_inner, "inner sweep cap")->check(CLI::PositiveNumber);
    solve->add_flag("--trace", solve_options.trace, "include the divergence trace of the best run");
    solve->add_flag("--single-sweep", solve_options.single_sweep, "one inner sweep per outer iteration");

    std::string check_path;
    auto* check = app.add_subcommand("check", "detect or verify the degree structure");
    check->add_option("file", check_path, "system file, or - for standard input")->required();

    std::string transform_path;
    auto* transform = app.add_subcommand("transform", "homogenize and positivize a signed system");
    transform->add_option("file", transform_path, "general system file, or - for standard input")->required();

    std::string kind = "bilinear";
    int m = 2;
    std::uint64_t seed = 0;
    auto* generate = app.add_subcommand("generate", "emit a test instance");
    generate->add_option("kind", kind, "instance kind (bilinear)");
    generate->add_option("-m,--m", m, "variables per group, 2..4")->check(CLI::Range(2, 4));
    generate->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*solve) {
            solve_options.threads = threads_from_environment();
            return emit(cmd_solve(read_input(solve_path), solve_options));
        }
        if (*check) return emit(cmd_check(read_input(check_path)));
        if (*transform) return emit(cmd_transform(read_input(transform_path)));
        if (*generate) return emit(cmd_generate(kind, m, seed));
    } catch (const InputError& e) {
        return emit(input_error(e.what()));
    }
    return kExitInputError;
}

}  // namespace klsolve::cli
