#pragma once

#include <string>

namespace curveml {

/// Shortest decimal that parses back to the same double; identical on every run.
std::string format_real(double v);

} // namespace curveml
