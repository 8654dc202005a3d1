#pragma once

#include <string>
#include <vector>

// Brute-force reference suites. Each suite rebuilds the quantity under test by
// direct enumeration (no shared code with the implementation beyond the data
// structures) and compares against the library output.

namespace ncksim::oracles {

struct Report {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> names();

// Runs one named suite; throws std::invalid_argument for unknown names.
Report run(const std::string& name);

// Runs every suite in declaration order.
std::vector<Report> run_all();

} // namespace ncksim::oracles
