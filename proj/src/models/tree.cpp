#include "tree.hpp"

#include <algorithm>
#include <numeric>

namespace coval::detail {

namespace {

struct SplitScan {
    int feature = -1;
    double weighted_gini = 0.0;
    bool valid = false;
};

// Weighted child Gini of splitting `rows` on `feature`; invalid when the
// feature does not vary within the node. Lower is better; Q = sum over values
// of (sum_c count^2)/count_v is maximized instead to save a few divisions.
SplitScan scan_feature(const Dataset& dataset, std::span<const int> rows, int class_count,
                       int feature) {
    const int card = dataset.cardinality(feature);
    std::vector<long> counts(static_cast<size_t>(card) * static_cast<size_t>(class_count), 0);
    std::vector<long> value_totals(static_cast<size_t>(card), 0);
    for (int i : rows) {
        const int v = dataset.row(i)[feature];
        ++counts[static_cast<size_t>(v) * static_cast<size_t>(class_count) +
                 static_cast<size_t>(dataset.label(i))];
        ++value_totals[static_cast<size_t>(v)];
    }
    int distinct = 0;
    for (long t : value_totals) {
        if (t > 0) ++distinct;
    }
    SplitScan out;
    out.feature = feature;
    if (distinct < 2) return out;
    double q = 0.0;
    for (int v = 0; v < card; ++v) {
        if (value_totals[static_cast<size_t>(v)] == 0) continue;
        double sq = 0.0;
        for (int c = 0; c < class_count; ++c) {
            const double n_vc = static_cast<double>(
                counts[static_cast<size_t>(v) * static_cast<size_t>(class_count) +
                       static_cast<size_t>(c)]);
            sq += n_vc * n_vc;
        }
        q += sq / static_cast<double>(value_totals[static_cast<size_t>(v)]);
    }
    out.weighted_gini = 1.0 - q / static_cast<double>(rows.size());
    out.valid = true;
    return out;
}

SplitScan best_split(const Dataset& dataset, std::span<const int> rows, int class_count,
                     std::span<const int> features) {
    SplitScan best;
    for (int f : features) {
        SplitScan scan = scan_feature(dataset, rows, class_count, f);
        if (!scan.valid) continue;
        if (!best.valid || scan.weighted_gini < best.weighted_gini) best = scan;
    }
    return best;
}

} // namespace

void Tree::fit(const Dataset& dataset, std::span<const int> rows, int class_count,
               const TreeOptions& opts, Rng* rng) {
    nodes_.clear();
    children_.clear();
    depth_ = 0;
    widths_.resize(static_cast<size_t>(dataset.feature_count()));
    for (int f = 0; f < dataset.feature_count(); ++f) {
        widths_[static_cast<size_t>(f)] = dataset.cardinality(f);
    }
    std::vector<int> owned(rows.begin(), rows.end());
    build(dataset, owned, class_count, 0, opts, rng);
}

int Tree::build(const Dataset& dataset, std::vector<int>& rows, int class_count, int depth,
                const TreeOptions& opts, Rng* rng) {
    depth_ = std::max(depth_, depth);
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::vector<long> class_counts(static_cast<size_t>(class_count), 0);
    for (int i : rows) ++class_counts[static_cast<size_t>(dataset.label(i))];
    {
        std::vector<double> dist(static_cast<size_t>(class_count), 0.0);
        for (int c = 0; c < class_count; ++c) {
            dist[static_cast<size_t>(c)] = static_cast<double>(class_counts[static_cast<size_t>(c)]) /
                                           static_cast<double>(rows.size());
        }
        nodes_[static_cast<size_t>(node_index)].distribution = std::move(dist);
    }

    const bool pure =
        std::count_if(class_counts.begin(), class_counts.end(), [](long c) { return c > 0; }) <= 1;
    const bool depth_capped = opts.max_depth >= 0 && depth >= opts.max_depth;
    if (pure || depth_capped) return node_index;

    const int k = dataset.feature_count();
    SplitScan split;
    if (rng != nullptr && opts.mtry >= 1 && opts.mtry < k) {
        std::vector<int> pool(static_cast<size_t>(k));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < opts.mtry; ++i) {
            const uint64_t j = static_cast<uint64_t>(i) + rng->below(static_cast<uint64_t>(k - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
        }
        std::vector<int> sampled(pool.begin(), pool.begin() + opts.mtry);
        std::sort(sampled.begin(), sampled.end());
        split = best_split(dataset, rows, class_count, sampled);
        if (!split.valid) {
            // No sampled feature varies here; widen to every feature so a
            // splittable node is never forced into a premature leaf.
            std::vector<int> all(static_cast<size_t>(k));
            std::iota(all.begin(), all.end(), 0);
            split = best_split(dataset, rows, class_count, all);
        }
    } else {
        std::vector<int> all(static_cast<size_t>(k));
        std::iota(all.begin(), all.end(), 0);
        split = best_split(dataset, rows, class_count, all);
    }
    if (!split.valid) return node_index;

    const int card = dataset.cardinality(split.feature);
    std::vector<std::vector<int>> buckets(static_cast<size_t>(card));
    for (int i : rows) buckets[static_cast<size_t>(dataset.row(i)[split.feature])].push_back(i);
    rows.clear();
    rows.shrink_to_fit();

    const int block = static_cast<int>(children_.size());
    children_.resize(children_.size() + static_cast<size_t>(card), -1);
    nodes_[static_cast<size_t>(node_index)].feature = split.feature;
    nodes_[static_cast<size_t>(node_index)].first_child = block;
    for (int v = 0; v < card; ++v) {
        if (buckets[static_cast<size_t>(v)].empty()) continue;
        const int child =
            build(dataset, buckets[static_cast<size_t>(v)], class_count, depth + 1, opts, rng);
        children_[static_cast<size_t>(block + v)] = child;
    }
    return node_index;
}

const std::vector<double>& Tree::leaf_distribution(std::span<const int32_t> row) const {
    int idx = 0;
    for (;;) {
        const Node& node = nodes_[static_cast<size_t>(idx)];
        if (node.feature < 0) return node.distribution;
        const int32_t v = row[static_cast<size_t>(node.feature)];
        // The child block is exactly cardinality(feature) wide, so any value
        // at or past the block (the unseen pseudo-value) has no branch.
        const int width = widths_[static_cast<size_t>(node.feature)];
        if (v < 0 || v >= width) return node.distribution;
        const int child = children_[static_cast<size_t>(node.first_child + v)];
        if (child < 0) return node.distribution;
        idx = child;
    }
}

} // namespace coval::detail
