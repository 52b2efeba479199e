#pragma once

#include <stdexcept>
#include <string>

namespace txcap {

// A link that cannot meet its SINR threshold even with zero interference
// (margin T <= 0).
class infeasible_link_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Closed forms are only available for path-loss exponent alpha = 4.
class unsupported_exponent_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Outage budgets sum to one or more; no successful transmissions remain.
class budget_exhausted_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root bracketing failed: no sign change on the given interval.
class bracketing_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Simulation or scenario settings that cannot be run as given.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config-document syntax or invariant violation, tagged with the 1-based
// line it occurred on.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace txcap
