#pragma once

#include <stdexcept>
#include <string>

namespace adframes {

// Raised when a numerical invariant breaks at run time (tracking continuity,
// propagation drift, gap collapse). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for malformed or inconsistent scenario configuration. Exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace adframes
