#include <cmath>

#include "coval/rng.hpp"
#include "families.hpp"
#include "tree.hpp"

namespace coval::detail {

namespace {

class RandomForestModel final : public FittedModel {
public:
    RandomForestModel(ModelSpec spec, const Dataset& dataset, std::span<const int> rows,
                      int class_count)
        : FittedModel(std::move(spec), class_count, dataset.feature_count()) {
        const ModelSpec& s = this->spec();
        const int n_trees = static_cast<int>(param_or(s, "n_trees", 100.0));
        TreeOptions opts;
        opts.max_depth = static_cast<int>(param_or(s, "max_depth", 5.0));
        const int k = dataset.feature_count();
        const int default_mtry =
            std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(k)))));
        opts.mtry = static_cast<int>(param_or(s, "mtry", default_mtry));

        // Every tree gets its own seed drawn up front, so training order (and
        // the OpenMP schedule) cannot change the result.
        Rng seeder(s.seed);
        std::vector<uint64_t> seeds(static_cast<size_t>(n_trees));
        for (uint64_t& seed : seeds) seed = seeder.next_u64();

        trees_.resize(static_cast<size_t>(n_trees));
        const long n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < n_trees; ++t) {
            Rng rng(seeds[static_cast<size_t>(t)]);
            std::vector<int> sample(static_cast<size_t>(n));
            for (long i = 0; i < n; ++i) {
                sample[static_cast<size_t>(i)] = rows[rng.below(static_cast<uint64_t>(n))];
            }
            trees_[static_cast<size_t>(t)].fit(dataset, sample, class_count, opts, &rng);
        }
    }

private:
    std::vector<double> proba_impl(std::span<const int32_t> row) const override {
        std::vector<double> mean(static_cast<size_t>(class_count()), 0.0);
        for (const Tree& tree : trees_) {
            const std::vector<double>& dist = tree.leaf_distribution(row);
            for (size_t c = 0; c < mean.size(); ++c) mean[c] += dist[c];
        }
        const double inv = 1.0 / static_cast<double>(trees_.size());
        for (double& p : mean) p *= inv;
        return mean;
    }

    std::vector<Tree> trees_;
};

} // namespace

std::unique_ptr<FittedModel> train_random_forest(const ModelSpec& spec, const Dataset& dataset,
                                                 std::span<const int> rows, int class_count) {
    return std::make_unique<RandomForestModel>(spec, dataset, rows, class_count);
}

} // namespace coval::detail
