#include "klsolve/cli.hpp"

int main(int argc, char** argv)
{
    return klsolve::cli::run(argc, argv);
}
