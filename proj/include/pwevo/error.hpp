#pragma once

#include <stdexcept>
#include <string>

namespace pwevo {

/// Bad input supplied by the caller: arguments, configuration, preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure while reading or processing data (I/O, undecodable input, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pwevo
