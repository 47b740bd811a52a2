#include "coval/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "coval/csv.hpp"
#include "coval/rng.hpp"

namespace coval {

namespace {

struct TokenIndex {
    std::unordered_map<std::string, int> lookup;
    std::vector<std::string> names;

    int intern(const std::string& token) {
        auto [it, inserted] = lookup.try_emplace(token, static_cast<int>(names.size()));
        if (inserted) names.push_back(token);
        return it->second;
    }
};

int resolve_class_column(int class_column, int width, const std::string& name) {
    int col = class_column < 0 ? width - 1 : class_column;
    if (col >= width) {
        throw std::runtime_error(name + ": class column " + std::to_string(class_column) +
                                 " out of range for " + std::to_string(width) + " columns");
    }
    return col;
}

} // namespace

Dataset Dataset::from_tokens(const std::vector<std::vector<std::string>>& rows,
                             const IngestOptions& options, std::vector<std::string> column_names,
                             std::string name, std::optional<int> presplit_test_begin) {
    if (rows.empty()) throw std::runtime_error(name + ": no data rows");
    if (presplit_test_begin &&
        (*presplit_test_begin < 1 || *presplit_test_begin >= static_cast<int>(rows.size()))) {
        throw std::runtime_error(name + ": pre-split test marker out of range");
    }
    const int width = static_cast<int>(rows.front().size());
    if (width < 2) throw std::runtime_error(name + ": need at least one feature and a class column");
    const int class_col = resolve_class_column(options.class_column, width, name);

    Dataset d;
    d.name_ = std::move(name);
    d.feature_count_ = width - 1;
    d.values_.reserve(rows.size() * static_cast<size_t>(d.feature_count_));
    d.labels_.reserve(rows.size());

    std::vector<TokenIndex> features(d.feature_count_);
    TokenIndex classes;

    for (size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.size()) != width) {
            throw std::runtime_error(d.name_ + ": row " + std::to_string(r + 1) + " has " +
                                     std::to_string(row.size()) + " fields, expected " +
                                     std::to_string(width));
        }
        int f = 0;
        for (int c = 0; c < width; ++c) {
            if (c == class_col) {
                d.labels_.push_back(classes.intern(row[c]));
            } else {
                d.values_.push_back(static_cast<int32_t>(features[f].intern(row[c])));
                ++f;
            }
        }
    }

    d.class_names_ = std::move(classes.names);
    d.value_names_.reserve(features.size());
    for (auto& fi : features) d.value_names_.push_back(std::move(fi.names));

    if (!column_names.empty() && static_cast<int>(column_names.size()) == width) {
        for (int c = 0; c < width; ++c) {
            if (c != class_col) d.feature_names_.push_back(column_names[c]);
        }
    } else {
        for (int f = 0; f < d.feature_count_; ++f) {
            d.feature_names_.push_back("f" + std::to_string(f));
        }
    }

    if (d.class_count() == 1) {
        std::fprintf(stderr, "warning: %s has a single class (%s)\n", d.name_.c_str(),
                     d.class_names_.front().c_str());
    }
    d.presplit_test_begin_ = presplit_test_begin;
    return d;
}

Dataset Dataset::from_csv(const std::string& path, const IngestOptions& options) {
    auto table = csv::read_file(path, options.has_header);
    return from_tokens(table.rows, options, table.header, path);
}

Dataset Dataset::from_csv_pair(const std::string& train_path, const std::string& test_path,
                               const IngestOptions& options) {
    auto train = csv::read_file(train_path, options.has_header);
    auto test = csv::read_file(test_path, options.has_header);
    if (!train.rows.empty() && !test.rows.empty() &&
        train.rows.front().size() != test.rows.front().size()) {
        throw std::runtime_error(train_path + " and " + test_path + " disagree on column count");
    }
    const int train_rows = static_cast<int>(train.rows.size());
    auto rows = std::move(train.rows);
    rows.insert(rows.end(), std::make_move_iterator(test.rows.begin()),
                std::make_move_iterator(test.rows.end()));
    return from_tokens(rows, options, train.header, train_path, train_rows);
}

std::vector<int32_t> Dataset::encode_row(std::span<const std::string> tokens) const {
    if (static_cast<int>(tokens.size()) != feature_count_) {
        throw std::runtime_error(name_ + ": expected " + std::to_string(feature_count_) +
                                 " feature tokens, got " + std::to_string(tokens.size()));
    }
    std::vector<int32_t> row(feature_count_);
    for (int f = 0; f < feature_count_; ++f) {
        const auto& names = value_names_[f];
        auto it = std::find(names.begin(), names.end(), tokens[f]);
        row[f] = it == names.end() ? static_cast<int32_t>(names.size())
                                   : static_cast<int32_t>(it - names.begin());
    }
    return row;
}

std::vector<std::string> Dataset::decode_row(int i) const {
    std::vector<std::string> tokens;
    tokens.reserve(feature_count_ + 1);
    auto r = row(i);
    for (int f = 0; f < feature_count_; ++f) tokens.push_back(value_names_[f][r[f]]);
    tokens.push_back(class_names_[labels_[i]]);
    return tokens;
}

PoolState split_pools(const Dataset& dataset, const SplitSpec& spec) {
    if (spec.test_fraction < 0 || spec.test_fraction >= 1 || spec.initial_fraction < 0 ||
        spec.initial_fraction >= 1) {
        throw std::runtime_error("split fractions must lie in [0, 1)");
    }
    const int n = dataset.row_count();
    if (n == 0) throw std::runtime_error("cannot split an empty dataset");

    PoolState pools;
    std::vector<int> order;
    if (spec.use_presplit_test) {
        if (!dataset.presplit_test_begin()) {
            throw std::runtime_error(dataset.name() + ": no pre-split test rows available");
        }
        const int begin = *dataset.presplit_test_begin();
        pools.test.resize(n - begin);
        std::iota(pools.test.begin(), pools.test.end(), begin);
        order.resize(begin);
        std::iota(order.begin(), order.end(), 0);
    } else {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }

    Rng rng(spec.seed);
    rng.shuffle(std::span<int>(order));

    size_t test_take = 0;
    if (!spec.use_presplit_test) {
        test_take = static_cast<size_t>(std::floor(spec.test_fraction * n));
        pools.test.assign(order.begin(), order.begin() + test_take);
        std::sort(pools.test.begin(), pools.test.end());
    }
    const size_t remainder = order.size() - test_take;
    const size_t initial_take = static_cast<size_t>(std::floor(spec.initial_fraction * remainder));
    if (initial_take == 0 || initial_take == remainder) {
        throw std::runtime_error("split leaves an empty labeled or unlabeled pool (N=" +
                                 std::to_string(n) + ")");
    }
    pools.labeled.assign(order.begin() + test_take, order.begin() + test_take + initial_take);
    pools.unlabeled.assign(order.begin() + test_take + initial_take, order.end());
    std::sort(pools.labeled.begin(), pools.labeled.end());
    std::sort(pools.unlabeled.begin(), pools.unlabeled.end());
    return pools;
}

OneHotLayout one_hot_layout(const Dataset& dataset) {
    OneHotLayout layout;
    layout.offsets.reserve(dataset.feature_count());
    for (int f = 0; f < dataset.feature_count(); ++f) {
        layout.offsets.push_back(layout.dim);
        layout.dim += dataset.cardinality(f);
    }
    return layout;
}

std::vector<double> one_hot_row(const OneHotLayout& layout, std::span<const int32_t> row,
                                std::span<const int> cardinalities) {
    std::vector<double> out(layout.dim, 0.0);
    for (size_t f = 0; f < row.size(); ++f) {
        if (row[f] < cardinalities[f]) out[layout.offsets[f] + row[f]] = 1.0;
    }
    return out;
}

std::vector<double> one_hot_encode(const Dataset& dataset) {
    OneHotLayout layout = one_hot_layout(dataset);
    std::vector<double> matrix(static_cast<size_t>(dataset.row_count()) * layout.dim, 0.0);
    for (int i = 0; i < dataset.row_count(); ++i) {
        auto r = dataset.row(i);
        double* out = matrix.data() + static_cast<size_t>(i) * layout.dim;
        for (int f = 0; f < dataset.feature_count(); ++f) out[layout.offsets[f] + r[f]] = 1.0;
    }
    return matrix;
}

} // namespace coval
