#pragma once

#include <stdexcept>
#include <string>

namespace boxverify {

// Base class for all recoverable tool errors. The CLI maps any of these to
// an `unknown` verdict with a diagnostic on stderr.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- specification parsing ---
struct SyntaxError : Error {
    using Error::Error;
};
struct UndeclaredVariable : Error {
    using Error::Error;
};
struct EmptySpec : Error {
    using Error::Error;
};
struct UnboundedInput : Error {
    using Error::Error;
};
struct InfeasibleBounds : Error {
    using Error::Error;
};

// --- model loading and inference ---
struct UnsupportedOperator : Error {
    using Error::Error;
};
struct NonChainGraph : Error {
    using Error::Error;
};
struct MalformedModel : Error {
    using Error::Error;
};
struct NonFiniteOutput : Error {
    using Error::Error;
};

// --- constraint evaluation ---
struct MissingVariable : Error {
    using Error::Error;
};

// --- filesystem ---
struct FileError : Error {
    using Error::Error;
};

// --- soft timeout (caught by the driver, reported as `unknown`) ---
struct TimeoutExpired : Error {
    using Error::Error;
};

}  // namespace boxverify
