#pragma once

#include <stdexcept>
#include <string>

namespace polyprime {

// Input was rejected before any computation ran. The CLI maps these to exit code 3.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : ValidationError {
    using ValidationError::ValidationError;
};

struct PreconditionViolation : ValidationError {
    using ValidationError::ValidationError;
};

struct Unsupported : ValidationError {
    using ValidationError::ValidationError;
};

// Cache file unreadable, wrong version or stale digest.
struct CacheError : ValidationError {
    using ValidationError::ValidationError;
};

// A result contradicts an identity that must hold exactly (exit code 4).
struct InternalInconsistency : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace polyprime
