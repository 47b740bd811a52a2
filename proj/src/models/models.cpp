#include "coval/models.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "families.hpp"

namespace coval {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"decision_tree", {"max_depth"}},
        {"random_forest", {"n_trees", "max_depth", "mtry"}},
        {"knn", {"k"}},
        {"logistic_regression", {"l2", "max_iters", "tol"}},
        {"svm_rbf", {"c", "tol"}},
    };
    return keys;
}

class ConstantModel final : public FittedModel {
public:
    ConstantModel(ModelSpec spec, int class_count, int feature_count, int the_class)
        : FittedModel(std::move(spec), class_count, feature_count), class_(the_class) {}

private:
    std::vector<double> proba_impl(std::span<const int32_t>) const override {
        std::vector<double> dist(static_cast<size_t>(class_count()), 0.0);
        dist[static_cast<size_t>(class_)] = 1.0;
        return dist;
    }
    int predict_impl(std::span<const int32_t>) const override { return class_; }
    int class_;
};

int parse_suffix_int(std::string_view token, size_t prefix_len, const char* what) {
    int value = 0;
    const char* first = token.data() + prefix_len;
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value < 1) {
        throw std::invalid_argument(std::string("invalid ") + what + " in model token '" +
                                    std::string(token) + "'");
    }
    return value;
}

} // namespace

std::string family_name(ModelFamily family) {
    switch (family) {
    case ModelFamily::kDecisionTree: return "decision_tree";
    case ModelFamily::kRandomForest: return "random_forest";
    case ModelFamily::kKnn: return "knn";
    case ModelFamily::kLogisticRegression: return "logistic_regression";
    case ModelFamily::kSvmRbf: return "svm_rbf";
    }
    throw std::logic_error("unreachable model family");
}

ModelSpec parse_model_token(std::string_view token) {
    ModelSpec spec;
    if (token == "dt" || token == "decision_tree") {
        spec.family = ModelFamily::kDecisionTree;
    } else if (token == "rf" || token == "random_forest") {
        spec.family = ModelFamily::kRandomForest;
    } else if (token.starts_with("rf")) {
        spec.family = ModelFamily::kRandomForest;
        spec.hyperparameters["max_depth"] = parse_suffix_int(token, 2, "depth");
    } else if (token == "knn") {
        spec.family = ModelFamily::kKnn;
    } else if (token.starts_with("knn")) {
        spec.family = ModelFamily::kKnn;
        spec.hyperparameters["k"] = parse_suffix_int(token, 3, "neighbor count");
    } else if (token == "logreg" || token == "logistic_regression") {
        spec.family = ModelFamily::kLogisticRegression;
    } else if (token == "svm" || token == "svm_rbf") {
        spec.family = ModelFamily::kSvmRbf;
    } else {
        throw std::invalid_argument("unknown model token '" + std::string(token) + "'");
    }
    validate_spec(spec);
    return spec;
}

std::string model_token(const ModelSpec& spec) {
    switch (spec.family) {
    case ModelFamily::kDecisionTree: return "dt";
    case ModelFamily::kRandomForest: {
        const int depth = static_cast<int>(detail::param_or(spec, "max_depth", 5.0));
        return depth >= 0 ? "rf" + std::to_string(depth) : "rf";
    }
    case ModelFamily::kKnn: return "knn";
    case ModelFamily::kLogisticRegression: return "logreg";
    case ModelFamily::kSvmRbf: return "svm";
    }
    throw std::logic_error("unreachable model family");
}

void validate_spec(const ModelSpec& spec) {
    const std::string name = family_name(spec.family);
    const std::set<std::string>& allowed = allowed_keys().at(name);
    for (const auto& [key, value] : spec.hyperparameters) {
        if (!allowed.count(key)) {
            throw std::invalid_argument("hyperparameter '" + key + "' is not valid for " + name);
        }
        if (!std::isfinite(value)) {
            throw std::invalid_argument("hyperparameter '" + key + "' must be finite");
        }
    }
    auto at_least = [&](const char* key, double minimum, double fallback) {
        if (detail::param_or(spec, key, fallback) < minimum) {
            throw std::invalid_argument("hyperparameter '" + std::string(key) + "' of " + name +
                                        " must be >= " + std::to_string(minimum));
        }
    };
    switch (spec.family) {
    case ModelFamily::kDecisionTree:
        at_least("max_depth", -1.0, -1.0);
        break;
    case ModelFamily::kRandomForest:
        at_least("n_trees", 1.0, 100.0);
        at_least("max_depth", -1.0, 5.0);
        if (spec.hyperparameters.count("mtry")) at_least("mtry", 1.0, 1.0);
        break;
    case ModelFamily::kKnn:
        at_least("k", 1.0, 5.0);
        break;
    case ModelFamily::kLogisticRegression:
        at_least("l2", 0.0, 1.0);
        at_least("max_iters", 1.0, 5000.0);
        at_least("tol", 0.0, 1e-6);
        break;
    case ModelFamily::kSvmRbf:
        at_least("c", 1e-12, 1.0);
        at_least("tol", 0.0, 1e-3);
        break;
    }
}

int FittedModel::predict_impl(std::span<const int32_t> row) const {
    const std::vector<double> dist = proba_impl(row);
    return argmax_lowest(dist);
}

void FittedModel::check_row(std::span<const int32_t> row) const {
    if (row.size() != static_cast<size_t>(feature_count_)) {
        throw std::invalid_argument("row width does not match the trained feature count");
    }
}

std::vector<int> FittedModel::predict_rows(const Dataset& dataset,
                                           std::span<const int> rows) const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (int i : rows) out.push_back(predict(dataset.row(i)));
    return out;
}

int argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[static_cast<size_t>(i)] > values[static_cast<size_t>(best)]) best = i;
    }
    return best;
}

std::unique_ptr<FittedModel> train(const ModelSpec& spec, const Dataset& dataset,
                                   std::span<const int> rows) {
    validate_spec(spec);
    if (rows.empty()) throw std::invalid_argument("cannot train on an empty row set");
    const int class_count = dataset.class_count();

    int first_class = dataset.label(rows.front());
    bool single_class = true;
    for (int i : rows) {
        if (dataset.label(i) != first_class) {
            single_class = false;
            break;
        }
    }
    if (single_class) {
        return std::make_unique<ConstantModel>(spec, class_count, dataset.feature_count(),
                                               first_class);
    }

    switch (spec.family) {
    case ModelFamily::kDecisionTree:
        return detail::train_decision_tree(spec, dataset, rows, class_count);
    case ModelFamily::kRandomForest:
        return detail::train_random_forest(spec, dataset, rows, class_count);
    case ModelFamily::kKnn:
        return detail::train_knn(spec, dataset, rows, class_count);
    case ModelFamily::kLogisticRegression:
        return detail::train_logistic_regression(spec, dataset, rows, class_count);
    case ModelFamily::kSvmRbf:
        return detail::train_svm_rbf(spec, dataset, rows, class_count);
    }
    throw std::logic_error("unreachable model family");
}

namespace detail {
double param_or(const ModelSpec& spec, const char* key, double fallback) {
    auto it = spec.hyperparameters.find(key);
    return it == spec.hyperparameters.end() ? fallback : it->second;
}
} // namespace detail

} // namespace coval
