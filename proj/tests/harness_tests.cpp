#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "coval/harness.hpp"

namespace fs = std::filesystem;
using coval::BiasRecord;
using coval::CurveRecord;
using coval::ExperimentConfig;
using coval::ExperimentResult;
using coval::Strategy;
using coval::Summary;

namespace {

CurveRecord curve(const std::string& dataset, const std::string& strategy,
                  const std::string& model, int rep, int batch, int n_labeled, double f1) {
    return {dataset, strategy, model, rep, batch, n_labeled, f1};
}

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.datasets.push_back({"balance-scale", "", -1, -1, true});
    config.strategies = {Strategy::kRandom, Strategy::kCds};
    config.batch_count = 2;
    config.repetitions = 2;
    config.sampling_model = coval::parse_model_token("dt");
    config.transfer_models.clear();
    return config;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / tag;
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("the default configuration runs the full benchmark grid") {
    const ExperimentConfig config = coval::default_config();
    CHECK(config.strategies == coval::all_strategies());
    CHECK(coval::model_token(config.sampling_model) == "rf5");
    REQUIRE(config.transfer_models.size() == 2);
    CHECK(coval::model_token(config.transfer_models[0]) == "dt");
    CHECK(coval::model_token(config.transfer_models[1]) == "svm");
    CHECK(config.repetitions == 3);
    CHECK(config.max_level == 6);
    CHECK(config.test_fraction == doctest::Approx(0.10));
    CHECK(config.initial_fraction == doctest::Approx(0.025));
    CHECK(config.datasets.size() == 6);
}

TEST_CASE("configuration files load with every field applied") {
    const TempDir dir("coval-config-load");
    const fs::path file = dir.path / "config.json";
    {
        std::ofstream out(file);
        out << R"({
  "datasets": ["balance-scale",
               {"path": "x.csv", "test": "y.csv", "batch_size": 10, "batches": 3,
                "header": false}],
  "test_fraction": 0.2,
  "initial_fraction": 0.05,
  "strategies": ["random", "cds"],
  "batch_size": 50,
  "batches": 4,
  "repetitions": 2,
  "sampling_model": "dt",
  "transfer_models": ["knn3"],
  "max_level": 3,
  "seed": 9,
  "out": "somewhere"
})";
    }
    const ExperimentConfig config = coval::load_config_file(file.string());
    REQUIRE(config.datasets.size() == 2);
    CHECK(config.datasets[0].path == "balance-scale");
    CHECK(config.datasets[0].test_path.empty());
    CHECK(config.datasets[0].batch_size == -1);
    CHECK(config.datasets[0].has_header);
    CHECK(config.datasets[1].path == "x.csv");
    CHECK(config.datasets[1].test_path == "y.csv");
    CHECK(config.datasets[1].batch_size == 10);
    CHECK(config.datasets[1].batch_count == 3);
    CHECK_FALSE(config.datasets[1].has_header);
    CHECK(config.test_fraction == doctest::Approx(0.2));
    CHECK(config.initial_fraction == doctest::Approx(0.05));
    CHECK(config.strategies == std::vector<Strategy>{Strategy::kRandom, Strategy::kCds});
    CHECK(config.batch_size == 50);
    CHECK(config.batch_count == 4);
    CHECK(config.repetitions == 2);
    CHECK(coval::model_token(config.sampling_model) == "dt");
    REQUIRE(config.transfer_models.size() == 1);
    CHECK(config.transfer_models[0].hyperparameters.at("k") == 3);
    CHECK(config.max_level == 3);
    CHECK(config.base_seed == 9);
    CHECK(config.out_dir == "somewhere");
}

TEST_CASE("unknown configuration keys are rejected by name") {
    const TempDir dir("coval-config-reject");
    const fs::path top = dir.path / "top.json";
    std::ofstream(top) << R"({"datasets": ["balance-scale"], "bogus": 1})";
    CHECK_THROWS_WITH_AS(coval::load_config_file(top.string()), doctest::Contains("bogus"),
                         std::runtime_error);

    const fs::path nested = dir.path / "nested.json";
    std::ofstream(nested) << R"({"datasets": [{"path": "a.csv", "rows": 5}]})";
    CHECK_THROWS_WITH_AS(coval::load_config_file(nested.string()), doctest::Contains("rows"),
                         std::runtime_error);

    CHECK_THROWS(coval::load_config_file((dir.path / "absent.json").string()));
}

TEST_CASE("a small experiment produces the full record grid") {
    const ExperimentConfig config = small_config();
    const ExperimentResult result = coval::run_experiment(config);

    REQUIRE(result.runs.size() == 1);
    const coval::DatasetRunInfo& info = result.runs[0];
    CHECK(info.name == "balance-scale");
    CHECK(info.rows == 624);
    CHECK(info.test_rows == 62);       // floor(0.10 * 624)
    CHECK(info.initial_labeled == 14); // floor(0.025 * 562)
    CHECK(info.batch_size == 25);      // builtin preset
    CHECK(info.batch_count == 2);      // global override

    // 2 strategies x 2 repetitions x 1 model x (batches + 1)
    CHECK(result.curves.size() == 12);
    // n_labeled grows by one batch of 25 per step, identically for all cells
    for (const CurveRecord& c : result.curves) {
        CHECK(c.model == "dt");
        CHECK(c.n_labeled == 14 + 25 * c.batch);
        CHECK(c.f1 >= 0.0);
        CHECK(c.f1 <= 1.0);
    }
    CHECK(result.biases.size() == 12);
    for (const BiasRecord& b : result.biases) {
        CHECK(b.bias >= 0.0);
        CHECK(b.bias <= 1.0);
    }

    // coverage traces exist only for the density strategy, one per batch
    CHECK(result.sdcc_traces.size() == 6);
    for (const auto& trace : result.sdcc_traces) {
        CHECK(trace.strategy == "cds");
        CHECK(trace.by_level.size() == 4); // T clamps to the feature count
        for (double v : trace.by_level) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("experiments replay bit for bit") {
    const ExperimentConfig config = small_config();
    const ExperimentResult a = coval::run_experiment(config);
    const ExperimentResult b = coval::run_experiment(config);
    REQUIRE(a.curves.size() == b.curves.size());
    for (size_t i = 0; i < a.curves.size(); ++i) {
        CHECK(a.curves[i].f1 == b.curves[i].f1);
        CHECK(a.curves[i].n_labeled == b.curves[i].n_labeled);
    }
    REQUIRE(a.biases.size() == b.biases.size());
    for (size_t i = 0; i < a.biases.size(); ++i) CHECK(a.biases[i].bias == b.biases[i].bias);
}

TEST_CASE("infeasible batch plans and empty configurations are rejected") {
    ExperimentConfig config = small_config();
    config.batch_count = 30; // 30 x 25 = 750 > the 548-row query pool
    CHECK_THROWS_WITH_AS(coval::run_experiment(config), doctest::Contains("query pool"),
                         std::runtime_error);

    ExperimentConfig empty = small_config();
    empty.datasets.clear();
    CHECK_THROWS_WITH_AS(coval::run_experiment(empty), doctest::Contains("datasets"),
                         std::runtime_error);

    ExperimentConfig none = small_config();
    none.repetitions = 0;
    CHECK_THROWS(coval::run_experiment(none));
}

TEST_CASE("summaries rank strategies against the best curve") {
    std::vector<CurveRecord> curves;
    // strategy "alpha": flat 0.5 over 10 added rows -> AUC 5
    curves.push_back(curve("ds", "alpha", "dt", 0, 0, 10, 0.5));
    curves.push_back(curve("ds", "alpha", "dt", 0, 1, 20, 0.5));
    // strategy "beta": flat 1.0 -> AUC 10
    curves.push_back(curve("ds", "beta", "dt", 0, 0, 10, 1.0));
    curves.push_back(curve("ds", "beta", "dt", 0, 1, 20, 1.0));

    const Summary summary = coval::summarize(curves, {}, "dt");
    REQUIRE(summary.auc.size() == 2);
    CHECK(summary.auc[0].strategy == "alpha");
    CHECK(summary.auc[0].auc_mean_curve == doctest::Approx(5.0));
    CHECK(summary.auc[0].mean_rep_auc == doctest::Approx(5.0));
    CHECK(summary.auc[0].final_f1_mean == doctest::Approx(0.5));
    CHECK(summary.auc[1].auc_mean_curve == doctest::Approx(10.0));

    REQUIRE(summary.percent_from_best.size() == 2);
    CHECK(summary.percent_from_best[0].strategy == "alpha");
    CHECK(summary.percent_from_best[0].percent == doctest::Approx(-50.0));
    CHECK(summary.percent_from_best[1].strategy == "beta");
    CHECK(summary.percent_from_best[1].percent == doctest::Approx(0.0));
}

TEST_CASE("repetition curves align on their common prefix") {
    std::vector<CurveRecord> curves;
    curves.push_back(curve("ds", "gamma", "dt", 0, 0, 10, 0.2));
    curves.push_back(curve("ds", "gamma", "dt", 0, 1, 20, 0.4));
    curves.push_back(curve("ds", "gamma", "dt", 0, 2, 30, 0.6)); // beyond the prefix
    curves.push_back(curve("ds", "gamma", "dt", 1, 0, 10, 0.4));
    curves.push_back(curve("ds", "gamma", "dt", 1, 1, 20, 0.6));

    const Summary summary = coval::summarize(curves, {}, "dt");
    REQUIRE(summary.auc.size() == 1);
    // mean curve over the first two points: (0.3, 0.5) over x in {0, 10}
    CHECK(summary.auc[0].auc_mean_curve == doctest::Approx(4.0));
    // per-rep prefix AUCs: 3.0 and 5.0
    CHECK(summary.auc[0].mean_rep_auc == doctest::Approx(4.0));
    // final point of the prefix, averaged across repetitions
    CHECK(summary.auc[0].final_f1_mean == doctest::Approx(0.5));
}

TEST_CASE("transfer rows gate on the random final score") {
    std::vector<CurveRecord> curves;
    for (const auto& [strategy, f1] : {std::pair<const char*, double>{"random", 0.6},
                                       {"uswcd", 0.9}}) {
        curves.push_back(curve("ds", strategy, "dt", 0, 0, 10, 0.5));
        curves.push_back(curve("ds", strategy, "dt", 0, 1, 20, 0.5));
        curves.push_back(curve("ds", strategy, "svm", 0, 0, 10, f1));
        curves.push_back(curve("ds", strategy, "svm", 0, 1, 20, f1));
    }

    const Summary gated = coval::summarize(curves, {}, "dt");
    REQUIRE(gated.transfer_gains.size() == 1);
    const auto& gain = gated.transfer_gains[0];
    CHECK(gain.model == "svm");
    CHECK(gain.gate_passed); // 0.6 >= 1.05 * 0.5
    CHECK(gain.random_original_final == doctest::Approx(0.5));
    CHECK(gain.random_transfer_final == doctest::Approx(0.6));
    REQUIRE(gain.percent_from_random.size() == 2);
    CHECK(gain.percent_from_random[0].first == "random");
    CHECK(gain.percent_from_random[0].second == 0.0);
    CHECK(gain.percent_from_random[1].first == "uswcd");
    // AUCs 9 vs 6 -> +50%
    CHECK(gain.percent_from_random[1].second == doctest::Approx(50.0));

    // identical finals fail the 5% improvement gate and omit the percents
    for (CurveRecord& c : curves) {
        if (c.model == "svm") c.f1 = 0.5;
    }
    const Summary flat = coval::summarize(curves, {}, "dt");
    REQUIRE(flat.transfer_gains.size() == 1);
    CHECK_FALSE(flat.transfer_gains[0].gate_passed);
    CHECK(flat.transfer_gains[0].percent_from_random.empty());
}

TEST_CASE("normalized scores take the median across datasets") {
    std::vector<CurveRecord> curves;
    const auto add_cell = [&](const char* dataset, const char* strategy, double f1) {
        curves.push_back(curve(dataset, strategy, "dt", 0, 0, 10, f1));
        curves.push_back(curve(dataset, strategy, "dt", 0, 1, 20, f1));
    };
    // "hi" beats "lo" on both datasets, whatever the absolute scale
    add_cell("d1", "lo", 0.2);
    add_cell("d1", "hi", 0.8);
    add_cell("d2", "lo", 0.5);
    add_cell("d2", "hi", 0.6);

    const Summary summary = coval::summarize(curves, {}, "dt");
    REQUIRE(summary.median_normalized.size() == 2);
    CHECK(summary.median_normalized[0].strategy == "lo");
    CHECK(summary.median_normalized[0].value == doctest::Approx(0.0));
    CHECK(summary.median_normalized[1].strategy == "hi");
    CHECK(summary.median_normalized[1].value == doctest::Approx(1.0));
}

TEST_CASE("bias tables keep one final value per dataset and repetition") {
    std::vector<CurveRecord> curves;
    curves.push_back(curve("d1", "alpha", "dt", 0, 0, 10, 0.5));
    curves.push_back(curve("d2", "alpha", "dt", 0, 0, 10, 0.5));
    std::vector<BiasRecord> biases = {
        {"d1", "alpha", 0, 0, 0.9}, {"d1", "alpha", 0, 1, 0.3}, // rep 0 ends at 0.3
        {"d1", "alpha", 1, 1, 0.5},                             // rep 1 ends at 0.5
        {"d2", "alpha", 0, 4, 0.1},                             // second dataset
    };
    const Summary summary = coval::summarize(curves, biases, "dt");
    REQUIRE(summary.bias.size() == 1);
    CHECK(summary.bias[0].strategy == "alpha");
    CHECK(summary.bias[0].final_values == std::vector<double>{0.3, 0.5, 0.1});
    CHECK(summary.bias[0].median == doctest::Approx(0.3));
}

TEST_CASE("emitted outputs regenerate to identical bytes") {
    const TempDir dir("coval-emit-regen");
    ExperimentConfig config = small_config();
    config.out_dir = dir.path.string();
    const ExperimentResult result = coval::run_experiment(config);
    const Summary summary =
        coval::summarize(result.curves, result.biases, coval::model_token(config.sampling_model));
    coval::emit_outputs(config, result, summary);

    for (const char* name :
         {"learning_curves.csv", "sampling_bias.csv", "sdcc_trace.csv", "summary.json",
          "config.json"}) {
        CHECK(fs::exists(dir.path / name));
    }

    const std::string before = slurp(dir.path / "summary.json");
    fs::remove(dir.path / "summary.json");
    coval::regenerate_summary(dir.path.string());
    CHECK(slurp(dir.path / "summary.json") == before);

    // the emitted config reloads into an equivalent experiment
    const ExperimentConfig reloaded = coval::load_config_file((dir.path / "config.json").string());
    CHECK(reloaded.strategies == config.strategies);
    CHECK(reloaded.batch_count == config.batch_count);
    CHECK(reloaded.repetitions == config.repetitions);
    CHECK(coval::model_token(reloaded.sampling_model) == "dt");
    CHECK(reloaded.out_dir == config.out_dir);
}
