#pragma once

// Integration acceptance suite: fifteen end-to-end criteria exercising the
// library against exact reference values and randomized soundness checks.
// Shared by the standalone `acceptance` binary and `sgp verify --suite`.

#include <iosfwd>
#include <string>

namespace sgp_tools {

struct AcceptanceOptions {
    unsigned long seed = 20260823;
    // empty = run everything; otherwise a criterion number ("1".."15"),
    // "all", or a case-insensitive substring of a criterion title
    std::string suite;
};

// Runs the selected criteria, printing exactly one PASS/FAIL line per
// criterion. Returns the number of failures (0 when everything passed).
// Throws std::invalid_argument if the suite name matches nothing.
int run_acceptance(const AcceptanceOptions& opt, std::ostream& os);

}  // namespace sgp_tools
