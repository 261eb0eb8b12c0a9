#include "curveml/report_format.hpp"

#include <charconv>
#include <cmath>

namespace curveml {

std::string format_real(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace curveml
