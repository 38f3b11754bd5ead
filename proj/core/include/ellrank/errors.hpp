#pragma once

#include <stdexcept>
#include <string>

namespace ellrank {

// Enumeration or point-count budget exceeded (CLI exit code 2).
struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Relation lattice could not be certified within budget; caller may escalate.
struct incomplete_lattice_error : std::runtime_error {
    explicit incomplete_lattice_error(const std::string& what) : std::runtime_error(what) {}
};

// Oracle gave up after escalation; reported, never silently wrong.
struct oracle_unavailable_error : std::runtime_error {
    explicit oracle_unavailable_error(const std::string& what) : std::runtime_error(what) {}
};

// A cross-check that must hold failed (CLI exit code 3).
struct inconsistency_error : std::logic_error {
    explicit inconsistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ellrank
