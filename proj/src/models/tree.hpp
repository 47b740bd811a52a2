#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coval/dataset.hpp"
#include "coval/rng.hpp"

namespace coval::detail {

/// Categorical decision tree shared by the decision_tree and random_forest
/// families. Splits are multiway: one child per value of the chosen feature.
/// The split feature minimizes the weighted child Gini impurity; ties resolve
/// to the lowest feature index, which makes the tree independent of training
/// row order. Zero-gain splits are taken as long as the feature varies within
/// the node, so consistent training data is always separated completely when
/// depth is unlimited.
struct TreeOptions {
    int max_depth = -1; // -1 = unlimited; nodes split while depth < max_depth
    int mtry = -1;      // features sampled per node; -1 = all features
};

class Tree {
public:
    /// rows may contain duplicates (bootstrap samples weight by repetition).
    /// rng is consulted only when opts.mtry is smaller than the feature count.
    void fit(const Dataset& dataset, std::span<const int> rows, int class_count,
             const TreeOptions& opts, Rng* rng);

    /// Class frequency distribution of the leaf reached by the row. Values
    /// with no branch (absent at fit time, or the unseen pseudo-value) resolve
    /// to the deepest matched node's own distribution.
    const std::vector<double>& leaf_distribution(std::span<const int32_t> row) const;

    int depth() const { return depth_; }

private:
    struct Node {
        int feature = -1; // -1 = leaf
        int first_child = -1;
        std::vector<double> distribution;
    };

    int build(const Dataset& dataset, std::vector<int>& rows, int class_count, int depth,
              const TreeOptions& opts, Rng* rng);

    std::vector<Node> nodes_;
    std::vector<int> children_; // flat child blocks, cardinality(feature) wide
    std::vector<int> widths_;   // per-feature cardinality captured at fit time
    int depth_ = 0;
};

} // namespace coval::detail
