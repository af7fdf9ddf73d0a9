#pragma once

#include <stdexcept>
#include <string>

namespace ptb {

// All domain errors derive from Error so callers can catch the family at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input matrix has determinant != 1.
struct DeterminantError : Error {
    explicit DeterminantError(const std::string& msg) : Error(msg) {}
};

// |trace| <= 2: no attracting fixed point, no twist-word normal form.
struct NonHyperbolic : Error {
    explicit NonHyperbolic(const std::string& msg) : Error(msg) {}
};

// A twist word was given with a syllable exponent <= 0.
struct NonPositiveSyllable : Error {
    explicit NonPositiveSyllable(const std::string& msg) : Error(msg) {}
};

// Edge path fails a structural requirement (adjacency, closure under the
// monodromy, ...).
struct InvalidPath : Error {
    explicit InvalidPath(const std::string& msg) : Error(msg) {}
};

// Path enumeration exceeded the configured cap.
struct TooManyPaths : Error {
    explicit TooManyPaths(const std::string& msg) : Error(msg) {}
};

// The angle polytope has no interior point (cannot run the maximizer).
struct NoInteriorPoint : Error {
    explicit NoInteriorPoint(const std::string& msg) : Error(msg) {}
};

// Newton ascent failed to reach the requested gradient tolerance.
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

// Malformed CLI/file input.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace ptb
