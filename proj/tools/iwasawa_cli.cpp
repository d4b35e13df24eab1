#include <iostream>

#include "CLI11.hpp"
#include "iwasawa/cli.hpp"

int main(int argc, char** argv) {
    using namespace iwasawa::cli;
    CLI::App app{"Iwasawa-algebra growth-number toolkit"};
    std::string command;
    std::string path;
    Overrides ov;
    std::string output;
    app.add_option("command", command, "analyze | project | weierstrass | growth-table | hypotheses | oracle")
        ->required()
        ->check(CLI::IsMember({"analyze", "project", "weierstrass", "growth-table", "hypotheses", "oracle"}));
    app.add_option("input", path, "JSON input file")->required();
    app.add_option("--precision", ov.precision, "coefficient precision m");
    app.add_option("--degree-bound", ov.degree_bound, "total-degree bound N");
    app.add_option("--nmax", ov.n_max, "largest level in corank tables");
    app.add_option("--output", output, "structured | table")->check(CLI::IsMember({"structured", "table"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    if (!output.empty()) ov.output = output == "table" ? OutputFormat::Table : OutputFormat::Structured;

    try {
        const ParsedInput in = parse_input(path, ov);
        return run_command(parse_command(command), in, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
