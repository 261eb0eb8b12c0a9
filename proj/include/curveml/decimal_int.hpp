#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace curveml {

// Arbitrary-magnitude integer kept in canonical decimal text. Curve data only
// ever needs to reduce these modulo small primes and to echo them back, so the
// representation is the digit string itself.
class DecimalInt {
public:
    DecimalInt() = default;
    DecimalInt(std::int64_t v);  // NOLINT: implicit from machine integers is intended

    /// Accepts an optional sign followed by one or more ASCII digits.
    static std::optional<DecimalInt> parse(std::string_view text);

    bool negative() const noexcept { return negative_; }
    bool is_zero() const noexcept { return digits_ == "0"; }

    /// Representative in [0, m); m must be in [1, 2^32).
    std::uint32_t residue(std::uint32_t m) const noexcept;

    std::optional<std::int64_t> to_int64() const noexcept;
    std::string to_string() const;

    friend bool operator==(const DecimalInt&, const DecimalInt&) = default;

private:
    bool negative_ = false;
    std::string digits_ = "0";  // no leading zeros
};

} // namespace curveml
