#pragma once

#include "curveml/curves.hpp"

#include <string>
#include <variant>

namespace curveml {

enum class CurveFamily { elliptic, genus2 };

/// One row of input data: a curve model plus the invariants read alongside it.
struct CurveRecord {
    std::variant<EllipticCurveQ, Genus2CurveQ> curve;
    CurveLabels labels;

    CurveFamily family() const noexcept {
        return std::holds_alternative<EllipticCurveQ>(curve) ? CurveFamily::elliptic : CurveFamily::genus2;
    }
    const std::string& label() const noexcept {
        return std::visit([](const auto& c) -> const std::string& { return c.label; }, curve);
    }
    std::int64_t conductor() const noexcept {
        return std::visit([](const auto& c) { return c.conductor; }, curve);
    }
    const EllipticCurveQ& elliptic() const { return std::get<EllipticCurveQ>(curve); }
    const Genus2CurveQ& genus2() const { return std::get<Genus2CurveQ>(curve); }
};

} // namespace curveml
