#include "coval/interactions.hpp"

#include <stdexcept>
#include <string>

namespace coval {

uint64_t binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
        result = result * static_cast<uint64_t>(n - r + i) / static_cast<uint64_t>(i);
    }
    return result;
}

std::vector<int> feature_subsets(int k, int t) {
    if (t < 1 || t > k) {
        throw std::invalid_argument("interaction level " + std::to_string(t) +
                                    " out of range for " + std::to_string(k) + " features");
    }
    constexpr uint64_t kMaxSubsets = 4'000'000;
    if (binomial(k, t) > kMaxSubsets) {
        throw std::invalid_argument("too many feature subsets: C(" + std::to_string(k) + "," +
                                    std::to_string(t) + ")");
    }
    std::vector<int> flat;
    flat.reserve(binomial(k, t) * static_cast<size_t>(t));
    std::vector<int> current(t);
    for (int i = 0; i < t; ++i) current[i] = i;
    while (true) {
        flat.insert(flat.end(), current.begin(), current.end());
        int i = t - 1;
        while (i >= 0 && current[i] == k - t + i) --i;
        if (i < 0) break;
        ++current[i];
        for (int j = i + 1; j < t; ++j) current[j] = current[j - 1] + 1;
    }
    return flat;
}

std::vector<Interaction> enumerate_interactions(std::span<const int32_t> row, int t) {
    const int k = static_cast<int>(row.size());
    auto subsets = feature_subsets(k, t);
    std::vector<Interaction> result;
    result.reserve(subsets.size() / t);
    for (size_t s = 0; s < subsets.size(); s += t) {
        Interaction x;
        x.pairs.reserve(t);
        for (int j = 0; j < t; ++j) {
            int f = subsets[s + j];
            x.pairs.emplace_back(f, row[f]);
        }
        result.push_back(std::move(x));
    }
    return result;
}

InteractionInventory build_inventory(const Dataset& dataset, std::span<const int> rows, int t) {
    InteractionInventory inv;
    inv.level = t;
    inv.source_count = static_cast<int>(rows.size());
    if (rows.empty()) {
        // Still validate the level against the dataset width.
        feature_subsets(dataset.feature_count(), t);
        return inv;
    }
    for (int i : rows) {
        for (auto& x : enumerate_interactions(dataset.row(i), t)) {
            inv.interactions.insert(std::move(x));
        }
    }
    return inv;
}

} // namespace coval
