#pragma once

#include <stdexcept>
#include <string>

namespace clcnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension or layout mismatch (zero-sized dims, weight/input shape conflicts).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A group count that does not divide the channel count it partitions.
class DivisibilityError : public Error {
public:
    using Error::Error;
};

/// Constraint violation in the group-parameter cost model.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid network configuration document.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace clcnet
