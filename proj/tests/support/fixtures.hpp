#pragma once

#include "curveml/curve_record.hpp"
#include "curveml/data_io.hpp"

#include <string>
#include <vector>

#ifndef CURVEML_TEST_DATA_DIR
#error "CURVEML_TEST_DATA_DIR must point at tests/data"
#endif

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(CURVEML_TEST_DATA_DIR) + "/" + name; }

inline const std::vector<curveml::CurveRecord>& elliptic() {
    static const auto records = curveml::read_elliptic_csv(std::filesystem::path(path("elliptic_small.csv")));
    return records;
}

inline const std::vector<curveml::CurveRecord>& genus2() {
    static const auto records = curveml::read_genus2_csv(std::filesystem::path(path("genus2_small.csv")));
    return records;
}

inline curveml::EllipticCurveQ elliptic_curve(std::string label, int e1, int e2, int e3, std::int64_t e4,
                                              std::int64_t e5) {
    curveml::EllipticCurveQ c;
    c.label = std::move(label);
    c.e1 = e1;
    c.e2 = e2;
    c.e3 = e3;
    c.e4 = e4;
    c.e5 = e5;
    return c;
}

/// y^2 + h(x) y = f(x) with the given coefficient lists (index = degree).
inline curveml::Genus2CurveQ genus2_curve(std::string label, std::vector<std::int64_t> f, std::vector<std::int64_t> h,
                                          std::int64_t disc) {
    curveml::Genus2CurveQ c;
    c.label = std::move(label);
    for (std::size_t k = 0; k < f.size(); ++k) c.f[k] = f[k];
    for (std::size_t k = 0; k < h.size(); ++k) c.h[k] = h[k];
    c.discriminant_abs = disc;
    return c;
}

inline std::vector<std::int64_t> coeffs(const std::array<curveml::DecimalInt, 7>& a) {
    std::vector<std::int64_t> v;
    for (const auto& x : a) v.push_back(*x.to_int64());
    return v;
}

inline std::vector<std::int64_t> coeffs(const std::array<curveml::DecimalInt, 4>& a) {
    std::vector<std::int64_t> v;
    for (const auto& x : a) v.push_back(*x.to_int64());
    return v;
}

} // namespace fixtures
