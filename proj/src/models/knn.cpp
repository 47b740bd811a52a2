#include <algorithm>
#include <array>

#include "families.hpp"

namespace coval::detail {

namespace {

class KnnModel final : public FittedModel {
public:
    KnnModel(ModelSpec spec, const Dataset& dataset, std::span<const int> rows, int class_count)
        : FittedModel(std::move(spec), class_count, dataset.feature_count()),
          k_(static_cast<int>(param_or(this->spec(), "k", 5.0))) {
        points_.reserve(rows.size());
        labels_.reserve(rows.size());
        indices_.reserve(rows.size());
        for (int i : rows) {
            std::span<const int32_t> r = dataset.row(i);
            points_.insert(points_.end(), r.begin(), r.end());
            labels_.push_back(dataset.label(i));
            indices_.push_back(i);
        }
    }

private:
    std::vector<double> proba_impl(std::span<const int32_t> row) const override {
        const size_t n = labels_.size();
        const size_t k_feat = static_cast<size_t>(feature_count());
        // (hamming distance, original dataset row index, position) triples;
        // the row index makes distance ties independent of training order.
        std::vector<std::array<int, 3>> order(n);
        for (size_t i = 0; i < n; ++i) {
            const int32_t* p = points_.data() + i * k_feat;
            int dist = 0;
            for (size_t f = 0; f < k_feat; ++f) {
                if (p[f] != row[f]) ++dist;
            }
            order[i] = {dist, indices_[i], static_cast<int>(i)};
        }
        const size_t take = std::min(static_cast<size_t>(k_), n);
        std::partial_sort(order.begin(), order.begin() + static_cast<long>(take), order.end());
        std::vector<double> dist(static_cast<size_t>(class_count()), 0.0);
        for (size_t j = 0; j < take; ++j) {
            dist[static_cast<size_t>(labels_[static_cast<size_t>(order[j][2])])] += 1.0;
        }
        for (double& p : dist) p /= static_cast<double>(take);
        return dist;
    }

    int k_;
    std::vector<int32_t> points_; // row-major copies of the training rows
    std::vector<int> labels_;
    std::vector<int> indices_;
};

} // namespace

std::unique_ptr<FittedModel> train_knn(const ModelSpec& spec, const Dataset& dataset,
                                       std::span<const int> rows, int class_count) {
    return std::make_unique<KnnModel>(spec, dataset, rows, class_count);
}

} // namespace coval::detail
