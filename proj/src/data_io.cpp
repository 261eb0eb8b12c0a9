#include "curveml/data_io.hpp"

#include "curveml/error.hpp"
#include "curveml/report_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

namespace curveml {

namespace {

constexpr std::string_view kCacheHeader = "curveml-cache v1";

std::vector<std::string> split_commas(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool getline_lf(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

// A row-level failure that carries the offending column.
struct FieldError {
    std::string column;
    std::string message;
};

class Row {
public:
    Row(const std::map<std::string, std::size_t>& columns, std::vector<std::string> cells)
        : columns_(columns), cells_(std::move(cells)) {}

    std::optional<std::string_view> raw(const std::string& column) const {
        const auto it = columns_.find(column);
        if (it == columns_.end() || it->second >= cells_.size()) return std::nullopt;
        const auto v = trim(cells_[it->second]);
        if (v.empty()) return std::nullopt;
        return v;
    }

    std::string_view required(const std::string& column) const {
        const auto v = raw(column);
        if (!v) throw FieldError{column, "missing value"};
        return *v;
    }

    std::int64_t integer(const std::string& column) const { return parse_int(column, required(column)); }

    std::optional<std::int64_t> optional_integer(const std::string& column) const {
        const auto v = raw(column);
        if (!v) return std::nullopt;
        return parse_int(column, *v);
    }

    DecimalInt big(const std::string& column) const {
        const auto v = required(column);
        auto d = DecimalInt::parse(v);
        if (!d) throw FieldError{column, "malformed integer '" + std::string(v) + "'"};
        return *d;
    }

    std::optional<DecimalInt> optional_big(const std::string& column) const {
        if (!raw(column)) return std::nullopt;
        return big(column);
    }

    std::optional<double> optional_real(const std::string& column) const {
        const auto v = raw(column);
        if (!v) return std::nullopt;
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), d);
        if (ec != std::errc{} || ptr != v->data() + v->size())
            throw FieldError{column, "malformed number '" + std::string(*v) + "'"};
        return d;
    }

    int ranged(const std::string& column, int lo, int hi) const {
        const auto v = integer(column);
        if (v < lo || v > hi) throw FieldError{column, column + " out of range"};
        return static_cast<int>(v);
    }

private:
    static std::int64_t parse_int(const std::string& column, std::string_view v) {
        std::int64_t x = 0;
        const char* first = v.data();
        if (!v.empty() && v.front() == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), x);
        if (ec != std::errc{} || ptr != v.data() + v.size() || first == v.data() + v.size())
            throw FieldError{column, "malformed integer '" + std::string(v) + "'"};
        return x;
    }

    const std::map<std::string, std::size_t>& columns_;
    std::vector<std::string> cells_;
};

std::map<std::string, std::size_t> parse_header(const std::string& line, const std::vector<std::string>& required) {
    std::map<std::string, std::size_t> columns;
    const auto names = split_commas(line);
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::string name(trim(names[i]));
        if (name.size() >= 3 && name.compare(0, 3, "\xEF\xBB\xBF") == 0) name.erase(0, 3);
        if (!columns.emplace(name, i).second) throw InputError("row 1: duplicate column '" + name + "'");
    }
    for (const auto& r : required)
        if (!columns.contains(r)) throw InputError("row 1, column " + r + ": missing required column");
    return columns;
}

const std::vector<std::string>& elliptic_required() {
    static const std::vector<std::string> cols{"label", "e1", "e2", "e3", "e4", "e5", "conductor", "rank",
                                               "torsion_order"};
    return cols;
}

const std::vector<std::string>& genus2_required() {
    static const std::vector<std::string> cols{"label", "f0", "f1", "f2", "f3", "f4", "f5", "f6",
                                               "h0", "h1", "h2", "h3", "conductor", "discriminant_abs",
                                               "rank", "torsion_order"};
    return cols;
}

std::int64_t positive(const Row& row, const std::string& column) {
    const auto v = row.integer(column);
    if (v < 1) throw FieldError{column, column + " must be positive"};
    return v;
}

std::int64_t non_negative(const Row& row, const std::string& column) {
    const auto v = row.integer(column);
    if (v < 0) throw FieldError{column, column + " must be non-negative"};
    return v;
}

std::vector<std::int64_t> parse_structure(const Row& row) {
    std::vector<std::int64_t> out;
    const auto v = row.raw("torsion_structure");
    if (!v) return out;
    std::size_t start = 0;
    for (;;) {
        const auto semi = v->find(';', start);
        const auto part = trim(v->substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
        std::int64_t f = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), f);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || f < 1)
            throw FieldError{"torsion_structure", "malformed torsion structure '" + std::string(*v) + "'"};
        out.push_back(f);
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return out;
}

CurveRecord parse_elliptic(const Row& row) {
    EllipticCurveQ c;
    c.label = std::string(row.required("label"));
    c.e1 = row.ranged("e1", 0, 1);
    c.e2 = row.ranged("e2", -1, 1);
    c.e3 = row.ranged("e3", -1, 1);
    c.e4 = row.big("e4");
    c.e5 = row.big("e5");
    c.conductor = positive(row, "conductor");
    c.discriminant_abs = row.optional_big("discriminant_abs");
    if (c.discriminant_abs && (c.discriminant_abs->negative() || c.discriminant_abs->is_zero()))
        throw FieldError{"discriminant_abs", "discriminant_abs must be positive"};

    CurveLabels l;
    l.rank = non_negative(row, "rank");
    l.torsion_order = positive(row, "torsion_order");
    l.torsion_structure = parse_structure(row);
    l.num_integral_points = row.optional_integer("num_integral_points");
    l.sha_analytic_order = row.optional_real("sha_analytic_order");
    c.validate();
    l.validate(true);
    return CurveRecord{std::move(c), std::move(l)};
}

CurveRecord parse_genus2(const Row& row) {
    Genus2CurveQ c;
    c.label = std::string(row.required("label"));
    for (std::size_t k = 0; k < c.f.size(); ++k) c.f[k] = row.big("f" + std::to_string(k));
    for (std::size_t k = 0; k < c.h.size(); ++k) c.h[k] = row.big("h" + std::to_string(k));
    c.conductor = positive(row, "conductor");
    c.discriminant_abs = row.big("discriminant_abs");
    if (c.discriminant_abs.negative() || c.discriminant_abs.is_zero())
        throw FieldError{"discriminant_abs", "discriminant_abs must be positive"};

    CurveLabels l;
    l.rank = non_negative(row, "rank");
    l.torsion_order = positive(row, "torsion_order");
    l.num_rational_points = row.optional_integer("num_rational_points");
    if (const auto s = row.optional_integer("sha_is_trivial")) {
        if (*s != 0 && *s != 1) throw FieldError{"sha_is_trivial", "sha_is_trivial must be 0 or 1"};
        l.sha_is_trivial = *s == 1;
    }
    c.validate();
    l.validate(false);
    return CurveRecord{std::move(c), std::move(l)};
}

template <class Parse>
CsvReadResult read_lenient(std::istream& in, const std::vector<std::string>& required, Parse parse) {
    CsvReadResult result;
    std::string line;
    if (!getline_lf(in, line)) throw InputError("row 1: missing header");
    const auto columns = parse_header(line, required);
    std::size_t row_no = 1;
    while (getline_lf(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        ++result.rows_seen;
        try {
            result.records.push_back(parse(Row(columns, split_commas(line))));
        } catch (const FieldError& e) {
            result.errors.push_back({row_no, e.column, e.message});
        } catch (const InputError& e) {
            result.errors.push_back({row_no, "", e.what()});
        }
    }
    return result;
}

std::vector<CurveRecord> strict(CsvReadResult r) {
    if (!r.errors.empty()) {
        std::string msg = r.errors.front().describe();
        if (r.errors.size() > 1) msg += " (and " + std::to_string(r.errors.size() - 1) + " more bad rows)";
        throw InputError(msg);
    }
    return std::move(r.records);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

std::string join_structure(const std::vector<std::int64_t>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(s[i]);
    }
    return out;
}

template <class T>
std::string opt(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>)
        return format_real(*v);
    else if constexpr (std::is_same_v<T, DecimalInt>)
        return v->to_string();
    else if constexpr (std::is_same_v<T, bool>)
        return *v ? "1" : "0";
    else
        return std::to_string(*v);
}

void check_label(const std::string& label) {
    if (label.empty() || label.find_first_of(",\r\n") != std::string::npos)
        throw std::invalid_argument("curve label '" + label + "' cannot be written to CSV");
}

} // namespace

std::string RowError::describe() const {
    std::string s = "row " + std::to_string(row);
    if (!column.empty()) s += ", column " + column;
    return s + ": " + message;
}

CsvReadResult read_elliptic_csv_lenient(std::istream& in) {
    return read_lenient(in, elliptic_required(), parse_elliptic);
}

CsvReadResult read_genus2_csv_lenient(std::istream& in) { return read_lenient(in, genus2_required(), parse_genus2); }

std::vector<CurveRecord> read_elliptic_csv(std::istream& in) { return strict(read_elliptic_csv_lenient(in)); }
std::vector<CurveRecord> read_genus2_csv(std::istream& in) { return strict(read_genus2_csv_lenient(in)); }

std::vector<CurveRecord> read_elliptic_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_elliptic_csv(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::vector<CurveRecord> read_genus2_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_genus2_csv(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

CurveFamily detect_family(const std::string& header_line) {
    std::string line = header_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::map<std::string, std::size_t> columns;
    for (const auto& n : split_commas(line)) {
        std::string name(trim(n));
        if (name.size() >= 3 && name.compare(0, 3, "\xEF\xBB\xBF") == 0) name.erase(0, 3);
        columns.emplace(name, 0);
    }
    const auto has_all = [&](const std::vector<std::string>& req) {
        return std::all_of(req.begin(), req.end(), [&](const std::string& c) { return columns.contains(c); });
    };
    if (columns.contains("f0") || columns.contains("h0")) {
        if (has_all(genus2_required())) return CurveFamily::genus2;
    } else if (has_all(elliptic_required())) {
        return CurveFamily::elliptic;
    }
    throw InputError("row 1: header matches neither the elliptic nor the genus-2 schema");
}

std::vector<CurveRecord> read_curves_csv(const std::filesystem::path& path) {
    std::string header;
    {
        auto in = open_in(path);
        if (!getline_lf(in, header)) throw InputError(path.string() + ": row 1: missing header");
    }
    CurveFamily family;
    try {
        family = detect_family(header);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return family == CurveFamily::elliptic ? read_elliptic_csv(path) : read_genus2_csv(path);
}

void write_elliptic_csv(std::ostream& out, const std::vector<CurveRecord>& records) {
    out << "label,e1,e2,e3,e4,e5,conductor,discriminant_abs,rank,torsion_order,torsion_structure,"
           "num_integral_points,sha_analytic_order\n";
    for (const auto& r : records) {
        const auto& c = r.elliptic();
        const auto& l = r.labels;
        check_label(c.label);
        out << c.label << ',' << c.e1 << ',' << c.e2 << ',' << c.e3 << ',' << c.e4.to_string() << ','
            << c.e5.to_string() << ',' << c.conductor << ',' << opt(c.discriminant_abs) << ',' << l.rank << ','
            << l.torsion_order << ',' << join_structure(l.torsion_structure) << ',' << opt(l.num_integral_points)
            << ',' << opt(l.sha_analytic_order) << '\n';
    }
}

void write_genus2_csv(std::ostream& out, const std::vector<CurveRecord>& records) {
    out << "label,f0,f1,f2,f3,f4,f5,f6,h0,h1,h2,h3,conductor,discriminant_abs,rank,torsion_order,"
           "num_rational_points,sha_is_trivial\n";
    for (const auto& r : records) {
        const auto& c = r.genus2();
        const auto& l = r.labels;
        check_label(c.label);
        out << c.label;
        for (const auto& f : c.f) out << ',' << f.to_string();
        for (const auto& h : c.h) out << ',' << h.to_string();
        out << ',' << c.conductor << ',' << c.discriminant_abs.to_string() << ',' << l.rank << ','
            << l.torsion_order << ',' << opt(l.num_rational_points) << ',' << opt(l.sha_is_trivial) << '\n';
    }
}

void cache_write(std::ostream& out, const std::vector<EulerVector>& vectors) {
    out << kCacheHeader << '\n';
    for (const auto& v : vectors) {
        v.validate();
        check_label(v.curve_label);
        out << vector_kind_name(v.kind) << ',' << v.N << ',' << v.curve_label;
        for (auto x : v.values) out << ',' << x;
        out << '\n';
    }
}

void cache_write(const std::filesystem::path& path, const std::vector<EulerVector>& vectors) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    cache_write(out, vectors);
    out.flush();
    if (!out) throw InputError("error writing " + path.string());
}

std::vector<EulerVector> cache_read(std::istream& in) {
    std::string line;
    if (!getline_lf(in, line) || line != kCacheHeader)
        throw InputError("cache line 1: expected header '" + std::string(kCacheHeader) + "'");
    std::vector<EulerVector> out;
    std::size_t line_no = 1;
    while (getline_lf(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = "cache line " + std::to_string(line_no) + ": ";
        const auto cells = split_commas(line);
        if (cells.size() < 3) throw InputError(where + "expected kind,N,label,values...");
        EulerVector v;
        const auto kind = parse_vector_kind(trim(cells[0]));
        if (!kind) throw InputError(where + "unknown vector kind '" + cells[0] + "'");
        v.kind = *kind;
        const auto n_text = trim(cells[1]);
        const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), v.N);
        if (ec != std::errc{} || ptr != n_text.data() + n_text.size() || v.N < 1)
            throw InputError(where + "bad N '" + cells[1] + "'");
        v.curve_label = std::string(trim(cells[2]));
        if (v.curve_label.empty()) throw InputError(where + "empty curve label");
        const std::size_t want = EulerVector::expected_length(v.kind, v.N);
        if (cells.size() - 3 != want)
            throw InputError(where + "expected " + std::to_string(want) + " values, found " +
                             std::to_string(cells.size() - 3));
        v.values.reserve(want);
        for (std::size_t i = 3; i < cells.size(); ++i) {
            const auto t = trim(cells[i]);
            std::int64_t x = 0;
            const auto [p, e] = std::from_chars(t.data(), t.data() + t.size(), x);
            if (t.empty() || e != std::errc{} || p != t.data() + t.size())
                throw InputError(where + "bad value '" + cells[i] + "'");
            v.values.push_back(x);
        }
        try {
            v.validate();
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<EulerVector> cache_read(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return cache_read(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

} // namespace curveml
