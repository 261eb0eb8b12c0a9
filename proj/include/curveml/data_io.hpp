#pragma once

// Curve CSV schemas and the Euler-vector cache file.
//
// Elliptic CSV, header required, columns in any order, unknown columns ignored:
//   label,e1,e2,e3,e4,e5,conductor,discriminant_abs,rank,torsion_order,
//   torsion_structure,num_integral_points,sha_analytic_order
// discriminant_abs, torsion_structure, num_integral_points and
// sha_analytic_order may be empty or absent. torsion_structure joins cyclic
// factor orders with ';' ("2;2"); empty means trivial or unknown.
//
// Genus-2 CSV:
//   label,f0,...,f6,h0,...,h3,conductor,discriminant_abs,rank,torsion_order,
//   num_rational_points,sha_is_trivial
// num_rational_points and sha_is_trivial (0 or 1) may be empty or absent.
//
// Row numbers in diagnostics count the header as row 1. Blank lines are not rows.
//
// Cache file:
//   curveml-cache v1
//   <kind>,<N>,<curve_label>,<v_0>,<v_1>,...

#include "curveml/curve_record.hpp"
#include "curveml/euler_features.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace curveml {

struct RowError {
    std::size_t row = 0;
    std::string column;  // empty when the problem is not tied to one column
    std::string message;

    std::string describe() const;
};

struct CsvReadResult {
    std::vector<CurveRecord> records;
    std::vector<RowError> errors;
    std::size_t rows_seen = 0;  // == records.size() + errors.size()
};

/// Collects per-row errors instead of stopping. A bad header still throws
/// InputError, since no row can be interpreted without it.
CsvReadResult read_elliptic_csv_lenient(std::istream& in);
CsvReadResult read_genus2_csv_lenient(std::istream& in);

/// Throws InputError describing the first bad row.
std::vector<CurveRecord> read_elliptic_csv(std::istream& in);
std::vector<CurveRecord> read_genus2_csv(std::istream& in);
std::vector<CurveRecord> read_elliptic_csv(const std::filesystem::path& path);
std::vector<CurveRecord> read_genus2_csv(const std::filesystem::path& path);

/// Reads whichever schema the header matches. Throws InputError when the
/// header fits neither.
std::vector<CurveRecord> read_curves_csv(const std::filesystem::path& path);
CurveFamily detect_family(const std::string& header_line);

/// All columns, in the order listed above. Records of the other family throw.
void write_elliptic_csv(std::ostream& out, const std::vector<CurveRecord>& records);
void write_genus2_csv(std::ostream& out, const std::vector<CurveRecord>& records);

void cache_write(std::ostream& out, const std::vector<EulerVector>& vectors);
void cache_write(const std::filesystem::path& path, const std::vector<EulerVector>& vectors);
std::vector<EulerVector> cache_read(std::istream& in);
std::vector<EulerVector> cache_read(const std::filesystem::path& path);

} // namespace curveml
