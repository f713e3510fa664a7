#pragma once

#include <stdexcept>
#include <string>

namespace metarepo {

/// Malformed input, or data on which a measure cannot be computed.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A store mutation collided with existing content or another writer.
class ConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure inside the results store.
class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoundError : public StoreError {
public:
    using StoreError::StoreError;
};

} // namespace metarepo
