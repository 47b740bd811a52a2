#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coval {

struct IngestOptions {
    bool has_header = false;
    /// Column holding the class label; -1 means the last column.
    int class_column = -1;
};

/// Immutable categorical dataset. Every cell is stored as a value index,
/// assigned per feature in first-appearance order during ingestion, so two
/// ingestions of the same rows produce identical encodings. Safe for shared
/// concurrent reads once constructed.
class Dataset {
public:
    static Dataset from_csv(const std::string& path, const IngestOptions& options = {});

    /// Pre-split datasets (separate train and test files). Rows from the train
    /// file come first; the value universe spans both files.
    static Dataset from_csv_pair(const std::string& train_path, const std::string& test_path,
                                 const IngestOptions& options = {});

    /// Ingest rows of raw tokens. Shared by the CSV path and the builtin
    /// dataset generators so both yield identical encodings. A non-null
    /// presplit_test_begin marks rows from that index on as the fixed test
    /// block (train/test pairs built in memory).
    static Dataset from_tokens(const std::vector<std::vector<std::string>>& rows,
                               const IngestOptions& options,
                               std::vector<std::string> column_names = {},
                               std::string name = "",
                               std::optional<int> presplit_test_begin = std::nullopt);

    const std::string& name() const { return name_; }
    int row_count() const { return static_cast<int>(labels_.size()); }
    int feature_count() const { return feature_count_; }
    int class_count() const { return static_cast<int>(class_names_.size()); }
    int cardinality(int feature) const { return static_cast<int>(value_names_[feature].size()); }

    std::span<const int32_t> row(int i) const {
        return {values_.data() + static_cast<size_t>(i) * feature_count_,
                static_cast<size_t>(feature_count_)};
    }
    int label(int i) const { return labels_[i]; }
    std::span<const int> labels() const { return labels_; }

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_names() const { return class_names_; }
    const std::vector<std::string>& value_names(int feature) const { return value_names_[feature]; }

    /// Reserved index for feature values outside the ingested universe.
    int unseen_value(int feature) const { return cardinality(feature); }

    /// Encode an external row of tokens against this dataset's universe.
    /// Unknown tokens map to the reserved unseen index.
    std::vector<int32_t> encode_row(std::span<const std::string> tokens) const;

    /// Token form of a stored row plus its label (inverse of ingestion).
    std::vector<std::string> decode_row(int i) const;

    /// Index range [first_test_row, row_count) when built from a train/test
    /// file pair; nullopt otherwise.
    std::optional<int> presplit_test_begin() const { return presplit_test_begin_; }

private:
    std::string name_;
    int feature_count_ = 0;
    std::vector<int32_t> values_; // row-major
    std::vector<int> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
    std::vector<std::vector<std::string>> value_names_;
    std::optional<int> presplit_test_begin_;
};

struct SplitSpec {
    double test_fraction = 0.10;
    double initial_fraction = 0.025; // of the post-test remainder
    uint64_t seed = 0;
    /// Take the test pool from the dataset's pre-split test rows instead of
    /// sampling it (Monk-style train/test file pairs).
    bool use_presplit_test = false;
};

/// Disjoint index pools over one dataset. Mutated only by the harness between
/// batches; single writer.
struct PoolState {
    std::vector<int> labeled;
    std::vector<int> unlabeled;
    std::vector<int> test;
};

/// Shuffle-based split: |test| = floor(test_fraction*N), then
/// |labeled| = floor(initial_fraction*(N-|test|)); the remainder is the query
/// pool. Identical (dataset, spec) give identical pools.
PoolState split_pools(const Dataset& dataset, const SplitSpec& spec);

struct OneHotLayout {
    int dim = 0;
    std::vector<int> offsets; // per feature
};

OneHotLayout one_hot_layout(const Dataset& dataset);

/// Dense 0/1 row for one categorical row; exactly one 1 per feature block
/// (unseen values leave their block all zero).
std::vector<double> one_hot_row(const OneHotLayout& layout, std::span<const int32_t> row,
                                std::span<const int> cardinalities);

/// Row-major encoded matrix for the whole dataset, dimension sum of
/// cardinalities, feature-major block layout.
std::vector<double> one_hot_encode(const Dataset& dataset);

} // namespace coval
