// Standalone acceptance-suite runner: one PASS/FAIL line per criterion,
// nonzero exit status when any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
    sgp_tools::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) {
            opt.seed = std::stoul(argv[++i]);
        } else if (arg == "--suite" && i + 1 < argc) {
            opt.suite = argv[++i];
        } else if (arg == "--help" || arg == "-h") {
            std::cout << "usage: acceptance [--suite <name|number|all>] [--seed <u64>]\n";
            return 0;
        } else {
            std::cerr << "unknown argument: " << arg << '\n';
            return 3;
        }
    }
    try {
        int failures = sgp_tools::run_acceptance(opt, std::cout);
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
