#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "coval/models.hpp"
#include "helpers.hpp"

using coval::Dataset;
using coval::ModelFamily;
using coval::ModelSpec;

namespace {

/// Two ternary features; class 0 iff the features agree (the first row agrees,
/// so the agreement class encodes to index 0). A depth-2 multiway tree
/// separates it perfectly while no single feature does.
Dataset agreement_data() {
    std::vector<std::vector<int>> cells;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int copy = 0; copy < 3; ++copy) cells.push_back({a, b, a == b ? 0 : 1});
        }
    }
    return testutil::from_ints(cells, "agreement");
}

std::vector<int> all_rows(const Dataset& d) {
    std::vector<int> rows(d.row_count());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

int training_errors(const coval::FittedModel& model, const Dataset& d,
                    std::span<const int> rows) {
    int errors = 0;
    for (int i : rows) {
        if (model.predict(d.row(i)) != d.label(i)) ++errors;
    }
    return errors;
}

} // namespace

TEST_CASE("model tokens round trip") {
    CHECK(coval::model_token(coval::parse_model_token("dt")) == "dt");
    CHECK(coval::model_token(coval::parse_model_token("rf5")) == "rf5");
    CHECK(coval::model_token(coval::parse_model_token("knn")) == "knn");
    CHECK(coval::model_token(coval::parse_model_token("logreg")) == "logreg");
    CHECK(coval::model_token(coval::parse_model_token("svm")) == "svm");

    const ModelSpec deep = coval::parse_model_token("rf12");
    CHECK(deep.family == ModelFamily::kRandomForest);
    CHECK(deep.hyperparameters.at("max_depth") == 12);

    const ModelSpec wide = coval::parse_model_token("knn3");
    CHECK(wide.hyperparameters.at("k") == 3);

    CHECK_THROWS_AS(coval::parse_model_token("boosted"), std::invalid_argument);
    CHECK_THROWS_AS(coval::parse_model_token("rf0"), std::invalid_argument);
}

TEST_CASE("unknown hyperparameters are rejected before training") {
    ModelSpec spec = coval::parse_model_token("dt");
    spec.hyperparameters["learning_rate"] = 0.1;
    CHECK_THROWS_AS(coval::validate_spec(spec), std::invalid_argument);
}

TEST_CASE("a decision tree fits feature interactions exactly") {
    const Dataset d = agreement_data();
    const auto rows = all_rows(d);
    const auto tree = coval::train(coval::parse_model_token("dt"), d, rows);
    CHECK(training_errors(*tree, d, rows) == 0);

    const auto proba = tree->predict_proba(d.row(0));
    CHECK(proba.size() == 2);
    CHECK(std::accumulate(proba.begin(), proba.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("depth-capped trees fall back to leaf distributions") {
    const Dataset d = agreement_data();
    const auto rows = all_rows(d);
    ModelSpec spec = coval::parse_model_token("dt");
    spec.hyperparameters["max_depth"] = 0; // a single leaf
    const auto stump = coval::train(spec, d, rows);
    // 6 of 9 combinations disagree, so the leaf majority is class 1 everywhere
    for (int i : rows) CHECK(stump->predict(d.row(i)) == 1);
    const auto proba = stump->predict_proba(d.row(0));
    CHECK(proba[0] == doctest::Approx(3.0 / 9.0));
    CHECK(proba[1] == doctest::Approx(6.0 / 9.0));
}

TEST_CASE("tree predictions ignore the order of the training rows") {
    const Dataset d = agreement_data();
    auto rows = all_rows(d);
    const auto forward = coval::train(coval::parse_model_token("dt"), d, rows);
    std::reverse(rows.begin(), rows.end());
    const auto backward = coval::train(coval::parse_model_token("dt"), d, rows);
    for (int i : all_rows(d)) {
        CHECK(forward->predict(d.row(i)) == backward->predict(d.row(i)));
        CHECK(forward->predict_proba(d.row(i)) == backward->predict_proba(d.row(i)));
    }
}

TEST_CASE("unseen feature values fall back to the last matched distribution") {
    const Dataset d = agreement_data();
    const auto tree = coval::train(coval::parse_model_token("dt"), d, all_rows(d));
    const auto probe = d.encode_row(std::vector<std::string>{"v9", "v9"});
    const auto proba = tree->predict_proba(probe);
    CHECK(proba[1] == doctest::Approx(6.0 / 9.0)); // root distribution
}

TEST_CASE("a forest averages its trees deterministically") {
    const Dataset d = agreement_data();
    const auto rows = all_rows(d);
    ModelSpec spec = coval::parse_model_token("rf5");
    spec.seed = 17;
    const auto a = coval::train(spec, d, rows);
    const auto b = coval::train(spec, d, rows);
    for (int i : rows) CHECK(a->predict_proba(d.row(i)) == b->predict_proba(d.row(i)));

    ModelSpec other = spec;
    other.seed = 18;
    const auto c = coval::train(other, d, rows);
    bool any_difference = false;
    for (int i : rows) {
        if (a->predict_proba(d.row(i)) != c->predict_proba(d.row(i))) any_difference = true;
    }
    CHECK(any_difference);
    CHECK(training_errors(*a, d, rows) <= 2);
}

TEST_CASE("single-class training data yields a constant predictor in every family") {
    coval::Rng rng(3);
    const Dataset d = testutil::random_dataset(rng, 40, 3, 3, 2);
    std::vector<int> ones;
    for (int i = 0; i < d.row_count(); ++i) {
        if (d.label(i) == 1) ones.push_back(i);
    }
    REQUIRE(ones.size() >= 3);
    for (const char* token : {"dt", "rf5", "knn", "logreg", "svm"}) {
        const auto model = coval::train(coval::parse_model_token(token), d, ones);
        CHECK(model->predict(d.row(0)) == 1);
        if (model->supports_proba()) {
            const auto proba = model->predict_proba(d.row(0));
            CHECK(proba[1] == doctest::Approx(1.0));
            CHECK(proba[0] == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("nearest neighbours memorize the training set at k equal to one") {
    coval::Rng rng(11);
    const Dataset d = testutil::random_dataset(rng, 50, 4, 3, 3);
    const auto rows = all_rows(d);
    ModelSpec spec = coval::parse_model_token("knn1");
    const auto knn = coval::train(spec, d, rows);
    // ties between coincident rows resolve to the lowest dataset row index, so
    // check only rows whose cells are unique
    for (int i : rows) {
        bool duplicated = false;
        for (int j : rows) {
            if (j != i && std::equal(d.row(i).begin(), d.row(i).end(), d.row(j).begin())) {
                duplicated = true;
            }
        }
        if (!duplicated) CHECK(knn->predict(d.row(i)) == d.label(i));
    }
}

TEST_CASE("neighbour ties prefer the earlier dataset row") {
    // rows 0 and 1 are equidistant from the probe; row 0's class must win
    const Dataset d = testutil::from_ints(
        {{0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {2, 2, 0}, {2, 2, 0}}, "ties");
    const auto knn = coval::train(coval::parse_model_token("knn1"), d,
                                  std::vector<int>{0, 1, 3, 4});
    CHECK(knn->predict(d.row(2)) == d.label(0));
    CHECK(d.label(0) != d.label(1));
}

TEST_CASE("nearest-neighbour results ignore training row order") {
    coval::Rng rng(13);
    const Dataset d = testutil::random_dataset(rng, 60, 4, 3, 3);
    auto rows = all_rows(d);
    std::vector<int> train_rows(rows.begin(), rows.begin() + 40);
    const auto forward = coval::train(coval::parse_model_token("knn"), d, train_rows);
    std::reverse(train_rows.begin(), train_rows.end());
    const auto backward = coval::train(coval::parse_model_token("knn"), d, train_rows);
    for (int i = 40; i < 60; ++i) {
        CHECK(forward->predict_proba(d.row(i)) == backward->predict_proba(d.row(i)));
    }
}

TEST_CASE("logistic regression separates a linear signal") {
    std::vector<std::vector<int>> cells;
    for (int v = 0; v < 3; ++v) {
        for (int copy = 0; copy < 10; ++copy) cells.push_back({v, v == 0 ? 0 : 1});
    }
    const Dataset d = testutil::from_ints(cells, "linear");
    const auto rows = all_rows(d);
    const auto model = coval::train(coval::parse_model_token("logreg"), d, rows);
    CHECK(training_errors(*model, d, rows) == 0);
    const auto proba = model->predict_proba(d.row(0));
    CHECK(std::accumulate(proba.begin(), proba.end(), 0.0) == doctest::Approx(1.0));
    CHECK(proba[0] > 0.8);
}

TEST_CASE("classes absent from the training rows get zero probability") {
    const Dataset d = testutil::from_ints(
        {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {0, 1, 0}, {1, 0, 1}, {2, 1, 2},
         {0, 2, 0}, {1, 2, 1}, {2, 0, 2}},
        "three-class");
    REQUIRE(d.class_count() == 3);
    std::vector<int> no_middle = {0, 1, 3, 4, 6, 7}; // classes 0 and 1 only
    const auto model = coval::train(coval::parse_model_token("logreg"), d, no_middle);
    const auto proba = model->predict_proba(d.row(2));
    REQUIRE(proba.size() == 3);
    CHECK(proba[2] == 0.0);
    CHECK(proba[0] + proba[1] == doctest::Approx(1.0));
}

TEST_CASE("the kernel machine buys nonlinear boundaries") {
    const Dataset d = agreement_data();
    const auto rows = all_rows(d);
    const auto svm = coval::train(coval::parse_model_token("svm"), d, rows);
    CHECK(training_errors(*svm, d, rows) == 0);
    CHECK_FALSE(svm->supports_proba());
    CHECK_THROWS_AS(svm->predict_proba(d.row(0)), std::logic_error);
}

TEST_CASE("kernel machine training is deterministic") {
    coval::Rng rng(29);
    const Dataset d = testutil::random_dataset(rng, 80, 4, 3, 3);
    std::vector<int> train_rows, probe_rows;
    for (int i = 0; i < d.row_count(); ++i) (i < 60 ? train_rows : probe_rows).push_back(i);
    const auto a = coval::train(coval::parse_model_token("svm"), d, train_rows);
    const auto b = coval::train(coval::parse_model_token("svm"), d, train_rows);
    for (int i : probe_rows) CHECK(a->predict(d.row(i)) == b->predict(d.row(i)));
}

TEST_CASE("prediction rejects rows of the wrong width") {
    const Dataset d = agreement_data();
    const auto model = coval::train(coval::parse_model_token("dt"), d, all_rows(d));
    const std::vector<int32_t> narrow = {0};
    CHECK_THROWS(model->predict(narrow));
}

TEST_CASE("training on an empty row selection is rejected") {
    const Dataset d = agreement_data();
    CHECK_THROWS(coval::train(coval::parse_model_token("dt"), d, std::vector<int>{}));
}
