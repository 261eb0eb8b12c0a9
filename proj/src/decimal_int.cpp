#include "curveml/decimal_int.hpp"

#include <charconv>
#include <limits>

namespace curveml {

DecimalInt::DecimalInt(std::int64_t v) : negative_(v < 0) {
    // magnitude via unsigned to survive INT64_MIN
    std::uint64_t mag = negative_ ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    digits_ = std::to_string(mag);
}

std::optional<DecimalInt> DecimalInt::parse(std::string_view text) {
    DecimalInt out;
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        out.negative_ = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) return std::nullopt;
    for (std::size_t k = i; k < text.size(); ++k)
        if (text[k] < '0' || text[k] > '9') return std::nullopt;
    while (i + 1 < text.size() && text[i] == '0') ++i;
    out.digits_ = std::string(text.substr(i));
    if (out.digits_ == "0") out.negative_ = false;
    return out;
}

std::uint32_t DecimalInt::residue(std::uint32_t m) const noexcept {
    std::uint64_t r = 0;
    for (char c : digits_) r = (r * 10 + static_cast<std::uint64_t>(c - '0')) % m;
    if (negative_ && r != 0) r = m - r;
    return static_cast<std::uint32_t>(r);
}

std::optional<std::int64_t> DecimalInt::to_int64() const noexcept {
    std::uint64_t mag = 0;
    auto [ptr, ec] = std::from_chars(digits_.data(), digits_.data() + digits_.size(), mag);
    if (ec != std::errc{} || ptr != digits_.data() + digits_.size()) return std::nullopt;
    constexpr auto max = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (!negative_) {
        if (mag > max) return std::nullopt;
        return static_cast<std::int64_t>(mag);
    }
    if (mag > max + 1) return std::nullopt;
    return static_cast<std::int64_t>(0 - mag);
}

std::string DecimalInt::to_string() const {
    return negative_ ? "-" + digits_ : digits_;
}

} // namespace curveml
