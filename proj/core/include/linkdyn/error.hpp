#pragma once

#include <stdexcept>
#include <string>

namespace linkdyn {

// Malformed input: bad syntax, undeclared names, ill-formed thread
// specifications, universe mismatches. CLI exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A bounded search (safety-check exploration, run fuel) ran out of
// budget before reaching a result. CLI exit code 2.
class BoundExceeded : public std::runtime_error {
public:
    explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace linkdyn
