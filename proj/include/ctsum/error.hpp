#pragma once

#include <stdexcept>
#include <string>

namespace ctsum {

// Bad or missing input data: paths, corpus files, configuration values.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An embedding provider could not deliver vectors (I/O, network, protocol).
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two vectors that must share a dimension do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ctsum
