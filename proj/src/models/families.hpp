#pragma once

#include <memory>
#include <span>

#include "coval/models.hpp"

namespace coval::detail {

double param_or(const ModelSpec& spec, const char* key, double fallback);

std::unique_ptr<FittedModel> train_decision_tree(const ModelSpec& spec, const Dataset& dataset,
                                                 std::span<const int> rows, int class_count);
std::unique_ptr<FittedModel> train_random_forest(const ModelSpec& spec, const Dataset& dataset,
                                                 std::span<const int> rows, int class_count);
std::unique_ptr<FittedModel> train_knn(const ModelSpec& spec, const Dataset& dataset,
                                       std::span<const int> rows, int class_count);
std::unique_ptr<FittedModel> train_logistic_regression(const ModelSpec& spec,
                                                       const Dataset& dataset,
                                                       std::span<const int> rows, int class_count);
std::unique_ptr<FittedModel> train_svm_rbf(const ModelSpec& spec, const Dataset& dataset,
                                           std::span<const int> rows, int class_count);

} // namespace coval::detail
