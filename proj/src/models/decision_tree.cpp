#include "families.hpp"
#include "tree.hpp"

namespace coval::detail {

namespace {

class DecisionTreeModel final : public FittedModel {
public:
    DecisionTreeModel(ModelSpec spec, const Dataset& dataset, std::span<const int> rows,
                      int class_count)
        : FittedModel(std::move(spec), class_count, dataset.feature_count()) {
        TreeOptions opts;
        opts.max_depth = static_cast<int>(param_or(this->spec(), "max_depth", -1.0));
        tree_.fit(dataset, rows, class_count, opts, nullptr);
    }

private:
    std::vector<double> proba_impl(std::span<const int32_t> row) const override {
        return tree_.leaf_distribution(row);
    }
    Tree tree_;
};

} // namespace

std::unique_ptr<FittedModel> train_decision_tree(const ModelSpec& spec, const Dataset& dataset,
                                                 std::span<const int> rows, int class_count) {
    return std::make_unique<DecisionTreeModel>(spec, dataset, rows, class_count);
}

} // namespace coval::detail
