#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coval/dataset.hpp"

namespace coval {

enum class ModelFamily {
    kDecisionTree,
    kRandomForest,
    kKnn,
    kLogisticRegression,
    kSvmRbf,
};

std::string family_name(ModelFamily family);

/// A trainable model description. Hyperparameters not present in the map take
/// the family default; unknown keys are rejected before training.
///
/// Defaults per family:
///   decision_tree:       max_depth -1 (unlimited)
///   random_forest:       n_trees 100, max_depth 5, mtry floor(sqrt(k))
///   knn:                 k 5
///   logistic_regression: l2 1.0, max_iters 5000, tol 1e-6
///   svm_rbf:             c 1.0, tol 1e-3
struct ModelSpec {
    ModelFamily family = ModelFamily::kRandomForest;
    std::map<std::string, double> hyperparameters;
    uint64_t seed = 0;
};

/// Parses a CLI/config token: dt, rf, rf<depth>, knn, knn<k>, logreg, svm.
ModelSpec parse_model_token(std::string_view token);

/// Canonical display token for reports (dt, rf5, knn, logreg, svm, ...).
std::string model_token(const ModelSpec& spec);

/// Throws std::invalid_argument on unknown keys or out-of-range values.
void validate_spec(const ModelSpec& spec);

class FittedModel {
public:
    virtual ~FittedModel() = default;

    const ModelSpec& spec() const { return spec_; }
    int class_count() const { return class_count_; }
    int feature_count() const { return feature_count_; }

    /// False only for families that expose no probability estimates (svm_rbf);
    /// predict_proba then throws std::logic_error.
    virtual bool supports_proba() const { return true; }

    std::vector<double> predict_proba(std::span<const int32_t> row) const {
        check_row(row);
        return proba_impl(row);
    }

    /// Argmax of the class scores; ties resolve to the lowest class index.
    int predict(std::span<const int32_t> row) const {
        check_row(row);
        return predict_impl(row);
    }

    std::vector<int> predict_rows(const Dataset& dataset, std::span<const int> rows) const;

protected:
    FittedModel(ModelSpec spec, int class_count, int feature_count)
        : spec_(std::move(spec)), class_count_(class_count), feature_count_(feature_count) {}

    virtual std::vector<double> proba_impl(std::span<const int32_t> row) const = 0;
    virtual int predict_impl(std::span<const int32_t> row) const;

    void check_row(std::span<const int32_t> row) const;

private:
    ModelSpec spec_;
    int class_count_ = 0;
    int feature_count_ = 0;
};

/// Trains spec.family on the given dataset rows (labels come from the
/// dataset). The returned model scores all dataset classes; classes absent
/// from the training rows get probability zero. A single-class training set
/// yields a constant predictor regardless of family.
///
/// Determinism: identical (spec, dataset, rows) give identical predictions.
/// Randomized families derive their internal streams from spec.seed alone —
/// random_forest seeds tree i with the i-th draw of Rng(spec.seed), each tree
/// drawing its bootstrap sample first and its per-node feature subsets after.
std::unique_ptr<FittedModel> train(const ModelSpec& spec, const Dataset& dataset,
                                   std::span<const int> rows);

int argmax_lowest(std::span<const double> values);

} // namespace coval
