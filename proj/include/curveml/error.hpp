#pragma once

#include <stdexcept>
#include <string>

namespace curveml {

// Raised for problems with caller-supplied data or arguments: malformed CSV
// rows, unknown experiment names, labels missing from a curve. The CLI maps
// these to exit code 1; anything else escaping to main is an internal error.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace curveml
