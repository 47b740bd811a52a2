#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"

#include "coval/dataset.hpp"
#include "helpers.hpp"

using coval::Dataset;
using coval::IngestOptions;
using coval::PoolState;
using coval::SplitSpec;

namespace {

std::vector<std::vector<std::string>> toy_tokens() {
    return {{"red", "small", "yes"},
            {"blue", "small", "no"},
            {"red", "large", "yes"},
            {"green", "small", "no"}};
}

} // namespace

TEST_CASE("values are encoded in first-appearance order") {
    const Dataset d = Dataset::from_tokens(toy_tokens(), {}, {"color", "size", "label"}, "toy");
    CHECK(d.row_count() == 4);
    CHECK(d.feature_count() == 2);
    CHECK(d.class_count() == 2);
    CHECK(d.cardinality(0) == 3); // red, blue, green
    CHECK(d.cardinality(1) == 2);
    CHECK(d.row(0)[0] == 0);
    CHECK(d.row(1)[0] == 1);
    CHECK(d.row(3)[0] == 2);
    CHECK(d.label(0) == 0);
    CHECK(d.label(1) == 1);
    CHECK(d.feature_names() == std::vector<std::string>{"color", "size"});
    CHECK(d.class_names() == std::vector<std::string>{"yes", "no"});
}

TEST_CASE("decode_row inverts ingestion and encode_row maps unknowns to the reserved index") {
    const Dataset d = Dataset::from_tokens(toy_tokens(), {}, {}, "toy");
    CHECK(d.decode_row(2) == std::vector<std::string>{"red", "large", "yes"});
    const std::vector<std::string> probe = {"blue", "medium"};
    const auto encoded = d.encode_row(probe);
    CHECK(encoded[0] == 1);
    CHECK(encoded[1] == d.unseen_value(1));
}

TEST_CASE("class column can sit anywhere") {
    IngestOptions opts;
    opts.class_column = 0;
    const Dataset d = Dataset::from_tokens(toy_tokens(), opts, {}, "toy");
    CHECK(d.feature_count() == 2);
    CHECK(d.class_count() == 3); // red, blue, green
    CHECK(d.row(0)[0] == 0);     // "small"
    CHECK_THROWS_AS(
        [&] {
            IngestOptions bad;
            bad.class_column = 7;
            return Dataset::from_tokens(toy_tokens(), bad, {}, "toy");
        }(),
        std::runtime_error);
}

TEST_CASE("identical token tables produce identical encodings") {
    const Dataset a = Dataset::from_tokens(toy_tokens(), {}, {}, "a");
    const Dataset b = Dataset::from_tokens(toy_tokens(), {}, {}, "b");
    for (int i = 0; i < a.row_count(); ++i) {
        CHECK(std::equal(a.row(i).begin(), a.row(i).end(), b.row(i).begin()));
        CHECK(a.label(i) == b.label(i));
    }
}

TEST_CASE("train and test files share one value universe") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const auto train = dir / "coval_pair_train.csv";
    const auto test = dir / "coval_pair_test.csv";
    std::ofstream(train) << "a,x,c0\nb,y,c1\n";
    std::ofstream(test) << "a,z,c1\nc,x,c0\n";
    IngestOptions opts;
    opts.has_header = false;
    const Dataset d = Dataset::from_csv_pair(train.string(), test.string(), opts);
    CHECK(d.row_count() == 4);
    CHECK(d.presplit_test_begin() == 2);
    CHECK(d.cardinality(0) == 3); // a, b, c
    CHECK(d.cardinality(1) == 3); // x, y, z
    std::ofstream(test) << "only,two\n";
    CHECK_THROWS(Dataset::from_csv_pair(train.string(), test.string(), opts));
    fs::remove(train);
    fs::remove(test);
}

TEST_CASE("split sizes follow the floor rules") {
    coval::Rng rng(7);
    const Dataset d = testutil::random_dataset(rng, 957, 4, 3, 2);
    REQUIRE(d.row_count() == 957);
    SplitSpec spec;
    spec.seed = 11;
    const PoolState pools = split_pools(d, spec);
    CHECK(pools.test.size() == 95);    // floor(0.10 * 957)
    CHECK(pools.labeled.size() == 21); // floor(0.025 * 862)
    CHECK(pools.unlabeled.size() == 841);
}

TEST_CASE("a zero test fraction is allowed") {
    coval::Rng rng(7);
    const Dataset d = testutil::random_dataset(rng, 10, 3, 2, 2);
    SplitSpec spec;
    spec.test_fraction = 0.0;
    spec.initial_fraction = 0.5;
    spec.seed = 3;
    const PoolState pools = split_pools(d, spec);
    CHECK(pools.test.empty());
    CHECK(pools.labeled.size() == 5);
    CHECK(pools.unlabeled.size() == 5);
}

TEST_CASE("degenerate splits are rejected") {
    coval::Rng rng(7);
    const Dataset d = testutil::random_dataset(rng, 10, 3, 2, 2);
    SplitSpec spec;
    spec.initial_fraction = 0.0; // empty labeled pool
    spec.seed = 3;
    CHECK_THROWS_AS(split_pools(d, spec), std::runtime_error);
}

TEST_CASE("pools are disjoint, sorted, and cover the dataset") {
    coval::Rng rng(9);
    const Dataset d = testutil::random_dataset(rng, 200, 5, 3, 3);
    SplitSpec spec;
    spec.seed = 42;
    const PoolState pools = split_pools(d, spec);
    std::set<int> all;
    for (const auto* pool : {&pools.labeled, &pools.unlabeled, &pools.test}) {
        CHECK(std::is_sorted(pool->begin(), pool->end()));
        for (int i : *pool) CHECK(all.insert(i).second); // no overlap
    }
    CHECK(static_cast<int>(all.size()) == d.row_count());
}

TEST_CASE("splits are reproducible and seed-sensitive") {
    coval::Rng rng(1);
    const Dataset d = testutil::random_dataset(rng, 300, 4, 3, 2);
    SplitSpec spec;
    spec.seed = 5;
    const PoolState a = split_pools(d, spec);
    const PoolState b = split_pools(d, spec);
    CHECK(a.labeled == b.labeled);
    CHECK(a.unlabeled == b.unlabeled);
    CHECK(a.test == b.test);
    spec.seed = 6;
    const PoolState c = split_pools(d, spec);
    CHECK(a.labeled != c.labeled);
}

TEST_CASE("pre-split test blocks stay fixed while the train side shuffles") {
    auto tokens = toy_tokens();
    tokens.push_back({"red", "small", "no"});
    tokens.push_back({"blue", "large", "yes"});
    const Dataset d = Dataset::from_tokens(tokens, {}, {}, "toy", 4);
    SplitSpec spec;
    spec.use_presplit_test = true;
    spec.initial_fraction = 0.5;
    spec.seed = 8;
    const PoolState pools = split_pools(d, spec);
    CHECK(pools.test == std::vector<int>{4, 5});
    CHECK(pools.labeled.size() == 2);
    CHECK(pools.unlabeled.size() == 2);
    for (int i : pools.labeled) CHECK(i < 4);
}

TEST_CASE("one-hot rows place a single 1 per feature block") {
    const Dataset d = Dataset::from_tokens(toy_tokens(), {}, {}, "toy");
    const coval::OneHotLayout layout = one_hot_layout(d);
    CHECK(layout.dim == 5); // 3 colors + 2 sizes
    std::vector<int> cards = {d.cardinality(0), d.cardinality(1)};
    const auto encoded = one_hot_row(layout, d.row(3), cards);
    CHECK(encoded == std::vector<double>{0, 0, 1, 1, 0});

    const auto probe = d.encode_row(std::vector<std::string>{"red", "medium"});
    const auto with_unseen = one_hot_row(layout, probe, cards);
    CHECK(with_unseen == std::vector<double>{1, 0, 0, 0, 0}); // unseen block all zero
}
