#include "curveml/metrics.hpp"

#include "curveml/report_format.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace curveml {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> names)
    : class_names(std::move(names)),
      counts(class_names.size(), std::vector<std::uint64_t>(class_names.size(), 0)) {}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<std::vector<std::uint64_t>> counts) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i].size() != counts.size()) throw std::invalid_argument("confusion matrix must be square");
        names.push_back(std::to_string(i));
    }
    ConfusionMatrix cm(std::move(names));
    cm.counts = std::move(counts);
    return cm;
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t n) {
    counts.at(truth).at(predicted) += n;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

double precision(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("precision of an empty confusion matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double mcc_binary(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) noexcept {
    const double num = static_cast<double>(tp) * static_cast<double>(tn) - static_cast<double>(fp) * static_cast<double>(fn);
    const double den = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) * static_cast<double>(tn + fp) *
                       static_cast<double>(tn + fn);
    if (den == 0.0) return 0.0;
    return num / std::sqrt(den);
}

// Gorodkin's R_K: (c s - sum_k p_k t_k) / sqrt((s^2 - sum p_k^2)(s^2 - sum t_k^2))
// with c the trace, s the total, t_k true counts and p_k predicted counts.
double mcc_multiclass(const ConfusionMatrix& cm) noexcept {
    const std::size_t k = cm.size();
    std::vector<double> t(k, 0.0), p(k, 0.0);
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const auto v = static_cast<double>(cm.counts[i][j]);
            t[i] += v;
            p[j] += v;
            s += v;
            if (i == j) c += v;
        }
    double pt = 0.0, pp = 0.0, tt = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        pt += p[i] * t[i];
        pp += p[i] * p[i];
        tt += t[i] * t[i];
    }
    const double den = (s * s - pp) * (s * s - tt);
    if (den <= 0.0) return 0.0;
    return (c * s - pt) / std::sqrt(den);
}

double mcc(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("mcc of an empty confusion matrix");
    if (cm.size() == 2) {
        // class 1 is "positive"; the value is symmetric in the choice
        return mcc_binary(cm.counts[1][1], cm.counts[0][0], cm.counts[0][1], cm.counts[1][0]);
    }
    return mcc_multiclass(cm);
}

CountSummary summarize_counts(std::span<const std::int64_t> values) {
    if (values.empty()) throw std::invalid_argument("summarize_counts: no values");
    CountSummary s;
    double sum = 0.0;
    for (auto v : values) {
        sum += static_cast<double>(v);
        ++s.histogram[v];
    }
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    double sq = 0.0;
    for (auto v : values) {
        const double d = static_cast<double>(v) - s.mean;
        sq += d * d;
    }
    s.std = std::sqrt(sq / n);
    return s;
}

std::string render_summary(const CountSummary& s, const std::string& prefix) {
    std::ostringstream out;
    std::uint64_t n = 0;
    for (const auto& [_, c] : s.histogram) n += c;
    out << prefix << "count=" << n << '\n';
    out << prefix << "mean=" << format_real(s.mean) << '\n';
    out << prefix << "std=" << format_real(s.std) << '\n';
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "true\\predicted";
    for (const auto& n : cm.class_names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < cm.size(); ++i) {
        out << cm.class_names[i];
        for (auto c : cm.counts[i]) out << ',' << c;
        out << '\n';
    }
    return out.str();
}

std::string histogram_csv(std::span<const CountSummary> summaries, std::span<const std::string> names) {
    if (summaries.size() != names.size()) throw std::invalid_argument("histogram_csv: one name per summary");
    std::set<std::int64_t> bins;
    for (const auto& s : summaries)
        for (const auto& [b, _] : s.histogram) bins.insert(b);
    std::ostringstream out;
    out << "bin";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (auto b : bins) {
        out << b;
        for (const auto& s : summaries) {
            auto it = s.histogram.find(b);
            out << ',' << (it == s.histogram.end() ? 0 : it->second);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace curveml
