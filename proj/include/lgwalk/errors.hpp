#pragma once

#include <stdexcept>
#include <string>

namespace lgwalk {

/// Violated precondition or malformed input. The CLI maps this to exit
/// status 2; unexpected runtime failures stay std::runtime_error (exit 1).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace lgwalk
