#pragma once

#include <cstdint>
#include <string>

namespace klsolve::cli {

// Exit codes of the klsolve tool.
inline constexpr int kExitSolved = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitApproximate = 2;

struct CommandResult {
    int exit_code = kExitSolved;
    std::string out;
    std::string err;
};

struct SolveOptions {
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    double outer_tol = 1e-9;
    double inner_tol = 1e-10;
    std::size_t max_outer = 10000;
    std::size_t max_inner = 200;
    bool trace = false;
    bool single_sweep = false;  // one inner sweep per outer iteration
    unsigned threads = 0;
};

// Each command takes the file contents and never throws; input problems map
// to kExitInputError with a diagnostic in err.
CommandResult cmd_solve(const std::string& text, const SolveOptions& options);
CommandResult cmd_check(const std::string& text);
CommandResult cmd_transform(const std::string& text);
CommandResult cmd_generate(const std::string& kind, int m, std::uint64_t seed);

// Entry point of the klsolve executable.
int run(int argc, char** argv);

}  // namespace klsolve::cli
