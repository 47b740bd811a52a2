#include <algorithm>
#include <cmath>

#include "families.hpp"

namespace coval::detail {

namespace {

/// Multinomial softmax regression on implicit one-hot features. The one-hot
/// matrix is never materialized: every categorical row touches exactly one
/// column per feature, so logits and gradients are sparse sums. Training is
/// full-batch gradient descent with a fixed step of 1/L, where L bounds the
/// gradient's Lipschitz constant via Gershgorin on X^T X (each one-hot column
/// meets at most k ones per row, so lambda_max <= k * max column count).
/// The gradient accumulates serially in row order, making the fit bitwise
/// reproducible; only the logit evaluations fan out across threads.
class LogisticRegressionModel final : public FittedModel {
public:
    LogisticRegressionModel(ModelSpec spec, const Dataset& dataset, std::span<const int> rows,
                            int class_count)
        : FittedModel(std::move(spec), class_count, dataset.feature_count()),
          layout_(one_hot_layout(dataset)) {
        const ModelSpec& s = this->spec();
        const double l2 = param_or(s, "l2", 1.0);
        const int max_iters = static_cast<int>(param_or(s, "max_iters", 5000.0));
        const double tol = param_or(s, "tol", 1e-6);

        class_map_.assign(static_cast<size_t>(class_count), -1);
        for (int i : rows) {
            const int label = dataset.label(i);
            if (class_map_[static_cast<size_t>(label)] < 0) {
                class_map_[static_cast<size_t>(label)] = 0;
            }
        }
        int next = 0;
        for (int c = 0; c < class_count; ++c) {
            if (class_map_[static_cast<size_t>(c)] == 0) {
                class_map_[static_cast<size_t>(c)] = next++;
            }
        }
        trained_classes_ = next;

        const size_t n = rows.size();
        const size_t dim = static_cast<size_t>(layout_.dim);
        const size_t m = static_cast<size_t>(trained_classes_);
        const int k = dataset.feature_count();

        std::vector<long> column_counts(dim, 0);
        std::vector<int> compact_labels(n);
        for (size_t i = 0; i < n; ++i) {
            std::span<const int32_t> row = dataset.row(rows[i]);
            for (int f = 0; f < k; ++f) {
                ++column_counts[static_cast<size_t>(layout_.offsets[static_cast<size_t>(f)] +
                                                    row[static_cast<size_t>(f)])];
            }
            compact_labels[i] = class_map_[static_cast<size_t>(dataset.label(rows[i]))];
        }
        const double max_count =
            static_cast<double>(*std::max_element(column_counts.begin(), column_counts.end()));
        const double n_d = static_cast<double>(n);
        const double lipschitz = 0.5 * static_cast<double>(k) * max_count / n_d + l2 / n_d;
        const double step = 1.0 / lipschitz;

        weights_.assign(m * dim, 0.0);
        std::vector<double> probs(n * m, 0.0);
        std::vector<double> grad(m * dim, 0.0);

        for (int iter = 0; iter < max_iters; ++iter) {
            const long n_l = static_cast<long>(n);
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n_l; ++i) {
                std::span<const int32_t> row = dataset.row(rows[static_cast<size_t>(i)]);
                double* p = probs.data() + static_cast<size_t>(i) * m;
                softmax_logits(row, p);
            }

            std::fill(grad.begin(), grad.end(), 0.0);
            for (size_t i = 0; i < n; ++i) {
                std::span<const int32_t> row = dataset.row(rows[i]);
                const double* p = probs.data() + i * m;
                for (size_t c = 0; c < m; ++c) {
                    const double err =
                        p[c] - (static_cast<int>(c) == compact_labels[i] ? 1.0 : 0.0);
                    if (err == 0.0) continue;
                    double* g = grad.data() + c * dim;
                    for (int f = 0; f < k; ++f) {
                        g[layout_.offsets[static_cast<size_t>(f)] + row[static_cast<size_t>(f)]] +=
                            err;
                    }
                }
            }
            double norm_sq = 0.0;
            for (size_t j = 0; j < grad.size(); ++j) {
                grad[j] = grad[j] / n_d + (l2 / n_d) * weights_[j];
                norm_sq += grad[j] * grad[j];
            }
            if (std::sqrt(norm_sq) < tol) break;
            for (size_t j = 0; j < grad.size(); ++j) weights_[j] -= step * grad[j];
        }
    }

private:
    void softmax_logits(std::span<const int32_t> row, double* out) const {
        const size_t m = static_cast<size_t>(trained_classes_);
        const size_t dim = static_cast<size_t>(layout_.dim);
        const int k = static_cast<int>(layout_.offsets.size());
        double max_logit = -1e300;
        for (size_t c = 0; c < m; ++c) {
            const double* w = weights_.data() + c * dim;
            double z = 0.0;
            for (int f = 0; f < k; ++f) {
                const int64_t col = layout_.offsets[static_cast<size_t>(f)] +
                                    row[static_cast<size_t>(f)];
                const int64_t next_off = f + 1 < k ? layout_.offsets[static_cast<size_t>(f) + 1]
                                                   : layout_.dim;
                if (col < next_off) z += w[col]; // unseen pseudo-values carry no weight
            }
            out[c] = z;
            max_logit = std::max(max_logit, z);
        }
        double total = 0.0;
        for (size_t c = 0; c < m; ++c) {
            out[c] = std::exp(out[c] - max_logit);
            total += out[c];
        }
        for (size_t c = 0; c < m; ++c) out[c] /= total;
    }

    std::vector<double> proba_impl(std::span<const int32_t> row) const override {
        std::vector<double> compact(static_cast<size_t>(trained_classes_), 0.0);
        softmax_logits(row, compact.data());
        std::vector<double> dist(static_cast<size_t>(class_count()), 0.0);
        for (int c = 0; c < class_count(); ++c) {
            const int idx = class_map_[static_cast<size_t>(c)];
            if (idx >= 0) dist[static_cast<size_t>(c)] = compact[static_cast<size_t>(idx)];
        }
        return dist;
    }

    OneHotLayout layout_;
    std::vector<double> weights_; // trained_classes x dim, row-major
    std::vector<int> class_map_;  // dataset class -> compact index, -1 if unseen
    int trained_classes_ = 0;
};

} // namespace

std::unique_ptr<FittedModel> train_logistic_regression(const ModelSpec& spec,
                                                       const Dataset& dataset,
                                                       std::span<const int> rows,
                                                       int class_count) {
    return std::make_unique<LogisticRegressionModel>(spec, dataset, rows, class_count);
}

} // namespace coval::detail
