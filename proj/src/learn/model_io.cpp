#include "curveml/learn/model_io.hpp"

#include "curveml/error.hpp"
#include "curveml/report_format.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <string_view>
#include <type_traits>
#include <vector>

namespace curveml::learn {

namespace {

constexpr std::string_view kHeader = "curveml-model v1";

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& key(std::string_view k) {
        out_ << k;
        return *this;
    }
    template <class T>
    Writer& field(const T& v) {
        if constexpr (std::is_floating_point_v<T>)
            out_ << ' ' << format_real(v);
        else
            out_ << ' ' << v;
        return *this;
    }
    template <class Range>
    Writer& fields(const Range& r) {
        for (const auto& v : r) field(v);
        return *this;
    }
    void end() { out_ << '\n'; }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next line's tokens; the first must equal `key`.
    void expect(std::string_view key) {
        std::string line;
        if (!std::getline(in_, line)) fail("unexpected end of model, wanted '" + std::string(key) + "'");
        ++line_no_;
        tokens_.clear();
        pos_ = 0;
        std::istringstream ss(line);
        for (std::string t; ss >> t;) tokens_.push_back(std::move(t));
        if (tokens_.empty() || tokens_[0] != key) fail("expected record '" + std::string(key) + "'");
        pos_ = 1;
    }

    std::string word() {
        if (pos_ >= tokens_.size()) fail("record has too few fields");
        return tokens_[pos_++];
    }

    template <class T>
    T number() {
        const std::string t = word();
        T v{};
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) fail("bad number '" + t + "'");
        return v;
    }

    template <class T>
    std::vector<T> numbers(std::size_t n) {
        std::vector<T> v(n);
        for (auto& x : v) x = number<T>();
        return v;
    }

    void done() {
        if (pos_ != tokens_.size()) fail("record has extra fields");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("model line " + std::to_string(line_no_) + ": " + what);
    }

    std::size_t line_no() const noexcept { return line_no_; }
    std::istream& stream() noexcept { return in_; }

    void set_header_line() { line_no_ = 1; }

private:
    std::istream& in_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

// Sanity bound on counts read from a file, so a corrupt size cannot trigger a huge allocation.
constexpr std::size_t kMaxCount = std::size_t{1} << 28;

std::size_t bounded(Reader& r, std::uint64_t v) {
    if (v > kMaxCount) r.fail("count too large");
    return static_cast<std::size_t>(v);
}

void write_state(Writer& w, const CategoricalNBModel& m) {
    w.key("feature_dim").field(m.feature_dim).end();
    w.key("alpha").field(m.alpha).end();
    w.key("class_counts").fields(m.class_counts).end();
    for (std::size_t j = 0; j < m.features.size(); ++j) {
        const auto& f = m.features[j];
        w.key("values").field(f.values.size()).fields(f.values).end();
        for (const auto& row : f.counts) w.key("counts").fields(row).end();
    }
}

void write_state(Writer& w, const GaussianNBModel& m) {
    w.key("feature_dim").field(m.feature_dim).end();
    w.key("epsilon").field(m.epsilon).end();
    w.key("priors").fields(m.priors).end();
    for (std::size_t c = 0; c < m.num_classes; ++c) {
        w.key("mean").fields(m.means[c]).end();
        w.key("variance").fields(m.variances[c]).end();
    }
}

void write_state(Writer& w, const LogisticModel& m) {
    w.key("feature_dim").field(m.feature_dim).end();
    w.key("iterations").field(m.iterations).end();
    w.key("mean").fields(m.mean).end();
    w.key("scale").fields(m.scale).end();
    w.key("params").field(m.params.size()).fields(m.params).end();
}

void write_state(Writer& w, const ForestModel& m) {
    w.key("feature_dim").field(m.feature_dim).end();
    w.key("max_depth").field(m.max_depth).end();
    w.key("features_per_split").field(m.features_per_split).end();
    w.key("trees").field(m.trees.size()).end();
    for (const auto& t : m.trees) {
        w.key("tree").field(t.seed).field(t.nodes.size()).end();
        for (const auto& n : t.nodes)
            w.key("node").field(n.feature).field(n.threshold).field(n.left).field(n.right).field(n.hist_offset).end();
        w.key("histograms").field(t.histograms.size()).fields(t.histograms).end();
    }
}

CategoricalNBModel read_categorical(Reader& r, std::size_t K) {
    CategoricalNBModel m;
    m.num_classes = K;
    r.expect("feature_dim");
    m.feature_dim = bounded(r, r.number<std::uint64_t>());
    r.done();
    r.expect("alpha");
    m.alpha = r.number<double>();
    r.done();
    if (!(m.alpha > 0.0)) r.fail("alpha must be positive");
    r.expect("class_counts");
    m.class_counts = r.numbers<std::uint64_t>(K);
    r.done();
    m.features.resize(m.feature_dim);
    for (auto& f : m.features) {
        r.expect("values");
        const std::size_t V = bounded(r, r.number<std::uint64_t>());
        f.values = r.numbers<std::int64_t>(V);
        r.done();
        for (std::size_t i = 1; i < V; ++i)
            if (!(f.values[i - 1] < f.values[i])) r.fail("values must be strictly increasing");
        f.counts.resize(K);
        for (auto& row : f.counts) {
            r.expect("counts");
            row = r.numbers<std::uint64_t>(V);
            r.done();
        }
    }
    m.finalize();
    return m;
}

GaussianNBModel read_gaussian(Reader& r, std::size_t K) {
    GaussianNBModel m;
    m.num_classes = K;
    r.expect("feature_dim");
    m.feature_dim = bounded(r, r.number<std::uint64_t>());
    r.done();
    r.expect("epsilon");
    m.epsilon = r.number<double>();
    r.done();
    r.expect("priors");
    m.priors = r.numbers<double>(K);
    r.done();
    for (std::size_t c = 0; c < K; ++c) {
        r.expect("mean");
        m.means.push_back(r.numbers<double>(m.feature_dim));
        r.done();
        r.expect("variance");
        m.variances.push_back(r.numbers<double>(m.feature_dim));
        r.done();
        for (double v : m.variances.back())
            if (!(v > 0.0)) r.fail("variances must be positive");
    }
    m.finalize();
    return m;
}

LogisticModel read_logistic(Reader& r, std::size_t K) {
    LogisticModel m;
    m.num_classes = K;
    r.expect("feature_dim");
    m.feature_dim = bounded(r, r.number<std::uint64_t>());
    r.done();
    r.expect("iterations");
    m.iterations = r.number<int>();
    r.done();
    r.expect("mean");
    m.mean = r.numbers<double>(m.feature_dim);
    r.done();
    r.expect("scale");
    m.scale = r.numbers<double>(m.feature_dim);
    r.done();
    r.expect("params");
    const std::size_t n = bounded(r, r.number<std::uint64_t>());
    const std::size_t heads = K == 2 ? 1 : K;
    if (n != heads * (m.feature_dim + 1)) r.fail("parameter count does not match classes and features");
    m.params = r.numbers<double>(n);
    r.done();
    return m;
}

ForestModel read_forest(Reader& r, std::size_t K) {
    ForestModel m;
    m.num_classes = K;
    r.expect("feature_dim");
    m.feature_dim = bounded(r, r.number<std::uint64_t>());
    r.done();
    r.expect("max_depth");
    m.max_depth = r.number<int>();
    r.done();
    r.expect("features_per_split");
    m.features_per_split = r.number<int>();
    r.done();
    r.expect("trees");
    m.trees.resize(bounded(r, r.number<std::uint64_t>()));
    r.done();
    for (auto& t : m.trees) {
        r.expect("tree");
        t.seed = r.number<std::uint64_t>();
        t.nodes.resize(bounded(r, r.number<std::uint64_t>()));
        r.done();
        if (t.nodes.empty()) r.fail("tree has no nodes");
        for (auto& n : t.nodes) {
            r.expect("node");
            n.feature = r.number<std::int32_t>();
            n.threshold = r.number<std::int64_t>();
            n.left = r.number<std::int32_t>();
            n.right = r.number<std::int32_t>();
            n.hist_offset = r.number<std::uint32_t>();
            r.done();
        }
        r.expect("histograms");
        const std::size_t h = bounded(r, r.number<std::uint64_t>());
        t.histograms = r.numbers<std::uint32_t>(h);
        r.done();
        const auto count = static_cast<std::int32_t>(t.nodes.size());
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            const auto& n = t.nodes[i];
            if (n.feature >= 0) {
                if (static_cast<std::size_t>(n.feature) >= m.feature_dim) r.fail("node feature out of range");
                // children strictly after their parent, so traversal terminates
                if (n.left <= static_cast<std::int32_t>(i) || n.right <= static_cast<std::int32_t>(i) ||
                    n.left >= count || n.right >= count)
                    r.fail("node child out of range");
            } else if (n.feature != -1 || std::size_t{n.hist_offset} + K > h) {
                r.fail("leaf histogram out of range");
            }
        }
    }
    return m;
}

} // namespace

void write_model(std::ostream& out, const TrainedModel& model) {
    for (const auto& name : model.class_names)
        if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
            throw std::invalid_argument("class name '" + name + "' cannot be serialized");
    Writer w(out);
    out << kHeader << '\n';
    w.key("kind").field(classifier_name(model.kind)).end();
    w.key("classes").field(model.class_names.size()).fields(model.class_names).end();
    std::visit([&](const auto& m) { write_state(w, m); }, model.state);
    out << "end\n";
}

std::string model_to_string(const TrainedModel& model) {
    std::ostringstream ss;
    write_model(ss, model);
    return ss.str();
}

TrainedModel read_model(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header != kHeader)
        throw InputError("model line 1: expected header '" + std::string(kHeader) + "'");
    Reader r(in);
    r.set_header_line();
    TrainedModel model;
    r.expect("kind");
    const auto kind = parse_classifier(r.word());
    if (!kind) r.fail("unknown classifier kind");
    r.done();
    model.kind = *kind;
    r.expect("classes");
    const std::size_t K = bounded(r, r.number<std::uint64_t>());
    if (K < 2) r.fail("a model needs at least 2 classes");
    for (std::size_t c = 0; c < K; ++c) model.class_names.push_back(r.word());
    r.done();
    switch (model.kind) {
    case ClassifierKind::naive_bayes: model.state = read_categorical(r, K); break;
    case ClassifierKind::gaussian_nb: model.state = read_gaussian(r, K); break;
    case ClassifierKind::logistic: model.state = read_logistic(r, K); break;
    case ClassifierKind::forest: model.state = read_forest(r, K); break;
    }
    r.expect("end");
    r.done();
    return model;
}

TrainedModel model_from_string(const std::string& text) {
    std::istringstream ss(text);
    return read_model(ss);
}

} // namespace curveml::learn
