// sl2orbit <command> [--input FILE] [--tol X] [--tol-branch X] [--seed N] [--samples N]
//
// Reads one JSON request (from FILE or stdin) and prints one JSON report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "sl2orbit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Conjugation invariants, stability and Magnus trace-map inversion for tuples of 2x2 matrices"};
    std::string command;
    std::string input;
    sl2orbit::cli::Flags flags;
    app.add_option("command", command, "one of the commands listed below")
        ->required()
        ->check(CLI::IsMember(sl2orbit::cli::commands()));
    app.add_option("--input", input, "request file (default: stdin)");
    app.add_option("--tol", flags.tol, "zero tolerance");
    app.add_option("--tol-branch", flags.tol_branch, "branch threshold for Magnus inversion");
    app.add_option("--seed", flags.seed, "random seed");
    app.add_option("--samples", flags.samples, "sample count for cs-sample");
    std::string footer = "Commands:";
    for (const auto& c : sl2orbit::cli::commands()) footer += " " + c;
    app.footer(footer);
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (input.empty() || input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "sl2orbit: cannot open " << input << "\n";
            return 1;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    const auto outcome = sl2orbit::cli::run(command, text, flags);
    std::cout << outcome.report;
    return outcome.exit_code;
}
