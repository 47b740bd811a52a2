#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coval/dataset.hpp"
#include "coval/models.hpp"
#include "coval/strategies.hpp"

namespace coval {

/// One dataset entry of an experiment: a CSV path or a builtin name, an
/// optional pre-split test CSV, and optional per-dataset batch overrides
/// (-1 defers to the builtin preset or the computed floor).
struct DatasetSource {
    std::string path;
    std::string test_path;
    int batch_size = -1;
    int batch_count = -1;
    bool has_header = true; // ignored for builtin names
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    double test_fraction = 0.10;
    double initial_fraction = 0.025;
    std::vector<Strategy> strategies;
    int batch_size = -1;  // global override; per-dataset values win
    int batch_count = -1; // global override; -1 = preset or computed
    int repetitions = 3;
    ModelSpec sampling_model;                // default random_forest depth 5
    std::vector<ModelSpec> transfer_models;  // default decision_tree, svm_rbf
    int max_level = 6;                       // T
    uint64_t base_seed = 0;
    std::string out_dir = "results";
};

ExperimentConfig default_config();

/// Reads a JSON experiment description (see README for the schema).
ExperimentConfig load_config_file(const std::string& path);

/// One learning-curve sample: macro-F1 of `model` on the test pool after
/// `batch` batches, with `n_labeled` training rows.
struct CurveRecord {
    std::string dataset;
    std::string strategy;
    std::string model;
    int repetition = 0;
    int batch = 0;
    int n_labeled = 0;
    double f1 = 0.0;
};

struct BiasRecord {
    std::string dataset;
    std::string strategy;
    int repetition = 0;
    int batch = 0;
    double bias = 0.0;
};

/// Per-level SDCC of the initial query pool against the growing labeled pool,
/// recorded each batch for the coverage-driven strategies. The reference set
/// is frozen at batch 0 so every level is non-increasing across batches.
struct SdccTraceRecord {
    std::string dataset;
    std::string strategy;
    int repetition = 0;
    int batch = 0;
    std::vector<double> by_level;
};

struct DatasetRunInfo {
    std::string name;
    int rows = 0;
    int test_rows = 0;
    int initial_labeled = 0;
    int batch_size = 0;
    int batch_count = 0;
};

struct ExperimentResult {
    std::vector<CurveRecord> curves;
    std::vector<BiasRecord> biases;
    std::vector<SdccTraceRecord> sdcc_traces;
    std::vector<DatasetRunInfo> runs;
};

/// Runs the full batch active-learning protocol.
///
/// For every (dataset, strategy, repetition) the master generator is
/// Rng(base_seed + repetition) and its draw order is fixed:
///   1. one draw seeds the pool split (so every strategy sees the same split
///      within a repetition),
///   2. one seed per model for the batch-0 trainings (sampling model first,
///      then the transfer models in config order),
///   3. per batch: committee training seeds (qbc only; forest, knn, logistic
///      order), then the strategy's own draws (random scores or the
///      degenerate-score fallback), then one seed per model for the
///      post-query trainings in the same order as batch 0.
/// Every training consumes exactly one seed draw whether or not the family
/// uses randomness, so the stream stays aligned across model choices.
///
/// The model trained after each query batch doubles as the scorer for the
/// next batch (the labeled pool is unchanged in between, so a retrain would
/// differ only in its seed draw).
///
/// Throws on unknown tokens or an infeasible batch plan
/// (batch_size * batch_count > query pool). If the query pool nevertheless
/// empties early, the curve is truncated with a warning on stderr.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Summary aggregates mirroring the benchmark's reporting tables; serialized
/// to summary.json. All AUCs are over the pointwise mean curve across
/// repetitions (the mean of per-repetition AUCs is reported alongside; the
/// two coincide when every repetition has the same x grid).
struct Summary {
    struct AucCell {
        std::string dataset, model, strategy;
        double auc_mean_curve = 0.0;
        double mean_rep_auc = 0.0;
        double final_f1_mean = 0.0;
    };
    struct PercentFromBest {
        std::string dataset, strategy;
        double percent = 0.0; // (auc - best)/best * 100; best shows 0.00
    };
    struct TransferGain {
        std::string dataset, model;
        bool gate_passed = false; // random/transfer final F1 >= 1.05x random/original
        double random_original_final = 0.0;
        double random_transfer_final = 0.0;
        // present only when the gate passed: (strategy, % AUC diff from random)
        std::vector<std::pair<std::string, double>> percent_from_random;
    };
    struct MedianNormalizedAuc {
        std::string model, strategy;
        double value = 0.0; // median across datasets of per-dataset min-max AUC
    };
    struct StrategyBias {
        std::string strategy;
        std::vector<double> final_values; // final-batch bias per (dataset, rep)
        double median = 0.0;
    };

    std::string original_model;
    std::vector<AucCell> auc;
    std::vector<PercentFromBest> percent_from_best;
    std::vector<TransferGain> transfer_gains;
    std::vector<MedianNormalizedAuc> median_normalized;
    std::vector<StrategyBias> bias;
};

Summary summarize(const std::vector<CurveRecord>& curves, const std::vector<BiasRecord>& biases,
                  const std::string& original_model);

/// Writes learning_curves.csv, sampling_bias.csv, summary.json, config.json.
/// Floating-point fields use shortest round-trip formatting, so identical
/// results produce identical bytes and the CSVs reparse exactly.
void emit_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                  const Summary& summary);

/// Rebuilds summary.json in `dir` from the CSVs it contains (the original
/// model token is read from config.json).
void regenerate_summary(const std::string& dir);

} // namespace coval
