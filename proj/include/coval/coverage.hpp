#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "coval/dataset.hpp"

namespace coval {

/// Per-unlabeled-row coverage density c_i: interactions of row i missing from
/// the labeled inventory, weighted 1/t per level t = 1..levels_used.
struct DensityVector {
    std::vector<double> values;
    int levels_used = 0;
};

/// Mixed-radix index space over one feature subset. The radix of each feature
/// reserves one slot beyond its cardinality for the unseen pseudo-value, so
/// externally encoded rows participate in interactions like any other row.
struct SubsetSpace {
    std::vector<int> features;
    std::vector<uint64_t> strides;
    uint64_t space = 1;      // product of (cardinality+1)
    uint64_t true_space = 1; // product of cardinality, for coverage denominators

    uint64_t rank(std::span<const int32_t> row) const {
        uint64_t r = 0;
        for (size_t j = 0; j < features.size(); ++j) {
            r += static_cast<uint64_t>(row[features[j]]) * strides[j];
        }
        return r;
    }
};

std::vector<SubsetSpace> make_subset_spaces(const Dataset& dataset, int t);

/// Membership set over one subset space: flat bitset for small spaces, hash
/// set otherwise.
class RankSet {
public:
    explicit RankSet(uint64_t space);
    bool test(uint64_t rank) const {
        if (use_bits_) return (bits_[rank >> 6] >> (rank & 63)) & 1;
        return sparse_.count(rank) > 0;
    }
    /// Returns true when the rank was not present before.
    bool insert(uint64_t rank);
    uint64_t size() const { return count_; }

private:
    bool use_bits_;
    uint64_t count_ = 0;
    std::vector<uint64_t> bits_;
    std::unordered_set<uint64_t> sparse_;
};

/// Incremental t-way interaction inventory of the labeled pool, levels
/// 1..max_level. The inventory only grows as rows are labeled, so one tracker
/// serves a whole active-learning run without rebuilds. Density evaluation is
/// read-only and parallelized across candidate rows; per-row results are exact
/// integer miss counts, so the output is independent of the schedule.
class CoverageTracker {
public:
    /// max_level is clamped to the feature count.
    CoverageTracker(const Dataset& dataset, int max_level);

    int max_level() const { return static_cast<int>(levels_.size()); }
    int labeled_rows() const { return labeled_rows_; }

    void add_row(std::span<const int32_t> row);
    void add_rows(std::span<const int> indices);

    DensityVector density(std::span<const int> unlabeled) const;
    double density_of_row(std::span<const int32_t> row) const;

    /// SDCC of the given rows against the labeled inventory for every level
    /// 1..max_level (index 0 holds level 1).
    std::vector<double> sdcc_by_level(std::span<const int> unlabeled) const;

private:
    struct Level {
        std::vector<SubsetSpace> spaces;
        std::vector<RankSet> sets;
    };
    const Dataset* dataset_;
    std::vector<Level> levels_;
    int labeled_rows_ = 0;
};

/// Proportion of the universe of possible t-way interactions present in rows.
double combinatorial_coverage(const Dataset& dataset, std::span<const int> rows, int t);

/// |U^t \ L^t| / |U^t| over deduplicated t-way inventories.
double sdcc(const Dataset& dataset, std::span<const int> u_rows, std::span<const int> l_rows,
            int t);

/// Coverage density of every unlabeled row against the labeled rows, levels
/// 1..min(max_level, k).
DensityVector coverage_density(const Dataset& dataset, std::span<const int> l_rows,
                               std::span<const int> u_rows, int max_level);

} // namespace coval
