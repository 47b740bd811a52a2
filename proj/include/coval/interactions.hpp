#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "coval/dataset.hpp"

namespace coval {

/// A t-way value combination: (feature, value) pairs with strictly increasing
/// feature indices.
struct Interaction {
    std::vector<std::pair<int, int>> pairs;

    int level() const { return static_cast<int>(pairs.size()); }
    auto operator<=>(const Interaction&) const = default;
};

/// All C(k, t) interactions of one row, in lexicographic feature-subset order.
std::vector<Interaction> enumerate_interactions(std::span<const int32_t> row, int t);

/// Distinct interactions present in a row collection at one level.
struct InteractionInventory {
    int level = 0;
    std::set<Interaction> interactions;
    int source_count = 0;

    bool contains(const Interaction& x) const { return interactions.count(x) > 0; }
};

InteractionInventory build_inventory(const Dataset& dataset, std::span<const int> rows, int t);

/// Feature subsets of size t over k features, lexicographic order, flattened
/// (subset s occupies [s*t, (s+1)*t)).
std::vector<int> feature_subsets(int k, int t);

uint64_t binomial(int n, int r);

} // namespace coval
