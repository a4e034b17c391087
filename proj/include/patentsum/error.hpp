#pragma once

#include <stdexcept>
#include <string>

namespace patentsum {

/// Malformed or missing input (files, flags, tags). The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model backend failed or returned something unusable. Exit code 2.
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The backend could not be reached at all (after retries).
class BackendUnavailable : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace patentsum
