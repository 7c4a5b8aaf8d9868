#pragma once

#include <stdexcept>
#include <string>

namespace artforge {

// Exit codes used by the CLI. Library code throws typed exceptions;
// tools/artforge.cpp maps them to these codes.
enum class ExitCode : int {
    ok = 0,
    failure = 1,
    config = 2,
    infeasible = 3,
    label_mismatch = 4,
    unknown_tx = 5,
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (snapshot, labels, CSV, model file).
struct ParseError : Error {
    using Error::Error;
};

// Invalid configuration values or incompatible options.
struct ConfigError : Error {
    using Error::Error;
};

// A generation request that cannot be satisfied (window too short,
// not enough prior outputs, ...).
struct InfeasibleError : Error {
    using Error::Error;
};

// Lookup of a global output index that was never produced.
struct UnknownOutputError : Error {
    using Error::Error;
};

// Lookup of a transaction id that is not in the store.
struct UnknownTxError : Error {
    using Error::Error;
};

}  // namespace artforge
