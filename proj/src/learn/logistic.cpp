#include "curveml/learn/logistic.hpp"

#include "curveml/error.hpp"
#include "curveml/learn/naive_bayes.hpp"
#include "curveml/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curveml::learn {

namespace {

// log(1 + e^z) without overflow
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

LogisticObjective::LogisticObjective(std::vector<double> x, std::vector<std::size_t> y, std::size_t rows,
                                     std::size_t feature_dim, std::size_t num_classes, double l2_lambda)
    : x_(std::move(x)), y_(std::move(y)), rows_(rows), dim_(feature_dim), num_classes_(num_classes), lambda_(l2_lambda) {
    if (num_classes_ < 2) throw std::invalid_argument("logistic regression needs at least 2 classes");
    if (x_.size() != rows_ * dim_ || y_.size() != rows_) throw std::invalid_argument("design matrix shape mismatch");
}

double LogisticObjective::evaluate(std::span<const double> params, std::span<double> grad) const {
    if (params.size() != num_params()) throw std::invalid_argument("parameter vector has the wrong length");
    const bool want_grad = !grad.empty();
    if (want_grad) {
        if (grad.size() != num_params()) throw std::invalid_argument("gradient buffer has the wrong length");
        std::fill(grad.begin(), grad.end(), 0.0);
    }
    const auto& k = simd::kernels();
    const std::size_t H = num_heads(), stride = dim_ + 1;
    const double inv_n = rows_ == 0 ? 0.0 : 1.0 / static_cast<double>(rows_);
    std::vector<double> z(H), coef(H);
    double loss = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* xi = x_.data() + i * dim_;
        for (std::size_t h = 0; h < H; ++h)
            z[h] = k.dot(params.data() + h * stride, xi, dim_) + params[h * stride + dim_];
        if (H == 1) {
            const double yi = y_[i] == 1 ? 1.0 : 0.0;
            loss += softplus(z[0]) - yi * z[0];
            coef[0] = sigmoid(z[0]) - yi;
        } else {
            const double zmax = *std::max_element(z.begin(), z.end());
            double sum = 0.0;
            for (std::size_t h = 0; h < H; ++h) sum += std::exp(z[h] - zmax);
            const double lse = zmax + std::log(sum);
            loss += lse - z[y_[i]];
            for (std::size_t h = 0; h < H; ++h) coef[h] = std::exp(z[h] - lse) - (h == y_[i] ? 1.0 : 0.0);
        }
        if (want_grad)
            for (std::size_t h = 0; h < H; ++h) {
                k.axpy(coef[h] * inv_n, xi, grad.data() + h * stride, dim_);
                grad[h * stride + dim_] += coef[h] * inv_n;
            }
    }
    loss *= inv_n;
    double penalty = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
        const double* w = params.data() + h * stride;
        penalty += k.dot(w, w, dim_);
        if (want_grad) k.axpy(lambda_, w, grad.data() + h * stride, dim_);
    }
    return loss + 0.5 * lambda_ * penalty;
}

std::vector<double> LogisticModel::decision(std::span<const std::int64_t> features) const {
    if (features.size() != feature_dim) throw std::invalid_argument("feature vector has the wrong length");
    std::vector<double> x(feature_dim);
    for (std::size_t j = 0; j < feature_dim; ++j) x[j] = (static_cast<double>(features[j]) - mean[j]) / scale[j];
    const std::size_t H = num_classes == 2 ? 1 : num_classes, stride = feature_dim + 1;
    const auto& k = simd::kernels();
    std::vector<double> z(H);
    for (std::size_t h = 0; h < H; ++h) z[h] = k.dot(params.data() + h * stride, x.data(), feature_dim) + params[h * stride + feature_dim];
    return z;
}

LogisticModel train_logistic(const LabeledDataset& train, const LogisticHyper& hyper) {
    if (train.num_classes() < 2) throw InputError("training needs at least 2 classes");
    if (train.rows.empty()) throw InputError("training set is empty");
    if (hyper.max_iters < 0 || !(hyper.l2_lambda >= 0.0) || !(hyper.tolerance > 0.0))
        throw std::invalid_argument("invalid logistic hyperparameters");
    const std::size_t n = train.rows.size(), d = train.feature_dim;

    LogisticModel m;
    m.num_classes = train.num_classes();
    m.feature_dim = d;
    m.mean.assign(d, 0.0);
    m.scale.assign(d, 0.0);
    for (const auto& r : train.rows)
        for (std::size_t j = 0; j < d; ++j) m.mean[j] += static_cast<double>(r.features[j]);
    for (auto& v : m.mean) v /= static_cast<double>(n);
    for (const auto& r : train.rows)
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = static_cast<double>(r.features[j]) - m.mean[j];
            m.scale[j] += dv * dv;
        }
    for (auto& v : m.scale) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v < 1e-12) v = 1.0;
    }

    std::vector<double> x(n * d);
    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            x[i * d + j] = (static_cast<double>(train.rows[i].features[j]) - m.mean[j]) / m.scale[j];
        y[i] = train.rows[i].class_index;
    }
    const LogisticObjective obj(std::move(x), std::move(y), n, d, m.num_classes, hyper.l2_lambda);

    std::vector<double> w(obj.num_params(), 0.0), g(w.size()), w_next(w.size()), g_next(w.size());
    double loss = obj.evaluate(w, g);
    double step = 1.0;
    int it = 0;
    for (; it < hyper.max_iters; ++it) {
        if (!std::isfinite(loss)) throw std::runtime_error("logistic regression diverged (non-finite loss)");
        double gmax = 0.0, gsq = 0.0;
        for (double v : g) {
            gmax = std::max(gmax, std::fabs(v));
            gsq += v * v;
        }
        if (gmax < hyper.tolerance) break;
        double next = 0.0;
        bool accepted = false;
        while (step >= 1e-16) {
            for (std::size_t i = 0; i < w.size(); ++i) w_next[i] = w[i] - step * g[i];
            next = obj.evaluate(w_next, g_next);
            if (std::isfinite(next) && next <= loss - 1e-4 * step * gsq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no representable descent left
        w.swap(w_next);
        g.swap(g_next);
        loss = next;
    }
    if (!std::isfinite(loss)) throw std::runtime_error("logistic regression diverged (non-finite loss)");
    m.params = std::move(w);
    m.iterations = it;
    return m;
}

std::size_t predict_logistic(const LogisticModel& model, std::span<const std::int64_t> features) {
    const auto z = model.decision(features);
    if (z.size() == 1) return z[0] > 0.0 ? 1 : 0;
    return argmax_lowest(z);
}

} // namespace curveml::learn
