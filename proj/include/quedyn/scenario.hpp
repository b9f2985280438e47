#pragma once

#include <cstdint>
#include <string>

#include "quedyn/hadamard.hpp"
#include "quedyn/pulse.hpp"
#include "quedyn/qdyn.hpp"
#include "quedyn/qite.hpp"

namespace quedyn {

/// Fully resolved run description parsed from a sectioned key-value file.
/// See docs/scenario-format.md for the grammar and full key list.
struct Scenario {
    std::string source_path;
    std::string molecule;               // fixture name or path to a .fcidump
    int initial_determinant = -1;       // -1 = FCI ground state
    LaserPulse pulse;
    std::string engine = "qdyn";        // tdci | qdyn | hadamard | qite
    PropagationConfig config;
    double reference_dt = 1.0;
    bool has_hadamard = false;
    HadamardPlan hadamard;
    bool has_cap = false;
    double cap_d = 0.0;
    QiteConfig qite;
    std::uint64_t seed = 1;
    std::string output_prefix;
    double population_threshold = 0.01;
};

/// Parses and validates a scenario file. Violations raise ParseError naming
/// the offending key and line.
Scenario load_scenario(const std::string& path);

}  // namespace quedyn
