#pragma once

#include <stdexcept>
#include <string>

namespace latprof {

// Invalid user input: CLI flags, config files, out-of-domain parameters.
// Maps to process exit code 1.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateBasisError : std::runtime_error {
    DegenerateBasisError() : std::runtime_error("degenerate basis") {}
};

struct NoVectorsError : std::runtime_error {
    NoVectorsError() : std::runtime_error("no vectors enumerated") {}
};

// A query asked for data beyond the enumerated window.  The library never
// extrapolates counts past the truncation radius.
struct WindowExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violation of a statement the artifact treats as exact: the pivot lemma,
// tau <= gamma, even multiplicities, scale invariance.  Carries what is
// needed to reproduce the failing trial.  Maps to process exit code 2.
struct FirewallViolation : std::runtime_error {
    std::string check;
    long long trial_index;
    std::string config_echo;

    FirewallViolation(std::string check_, long long trial, std::string echo)
        : std::runtime_error("exactness firewall: " + check_ + " violated at trial " +
                             std::to_string(trial)),
          check(std::move(check_)),
          trial_index(trial),
          config_echo(std::move(echo)) {}
};

}  // namespace latprof
